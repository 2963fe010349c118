#include "opinionlearn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "opinionlearn/baselines.hpp"
#include "opinionlearn/io.hpp"
#include "opinionlearn/metrics.hpp"
#include "opinionlearn/random.hpp"

namespace opinionlearn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::uint64_t kModelStream = 0x6d6f64656cULL;
constexpr std::uint64_t kEvalStream = 0x6576616cULL;
constexpr std::uint64_t kRunStream = 0x72756eULL;

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::IE: return "IE";
    case Algorithm::EG: return "eG";
    case Algorithm::RS: return "RS";
    case Algorithm::OLS: return "OLS";
    case Algorithm::SS: return "SS";
    case Algorithm::GPR: return "GPR";
    case Algorithm::IEp: return "IEp";
    case Algorithm::EGp: return "eGp";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms)
    if (algorithm_name(a) == name) return a;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> parse_roster(std::string_view list) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    std::string_view tok = list.substr(start, comma - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (!tok.empty()) {
      const Algorithm a = parse_algorithm(tok);
      if (std::find(out.begin(), out.end(), a) != out.end())
        throw std::invalid_argument("algorithm listed twice: " + std::string(tok));
      out.push_back(a);
    }
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty algorithm roster");
  return out;
}

bool has_topology(Algorithm a) { return a != Algorithm::GPR; }

bool has_rules(Algorithm a) {
  return a == Algorithm::IE || a == Algorithm::EG || a == Algorithm::RS || a == Algorithm::IEp ||
         a == Algorithm::EGp;
}

int ExperimentConfig::max_horizon() const {
  return horizons.empty() ? 0 : *std::max_element(horizons.begin(), horizons.end());
}

int ExperimentConfig::t_split_for(int T) const {
  return bandit.t_split > 0 ? bandit.t_split : (4 * T) / 5;
}

void ExperimentConfig::validate() const {
  for (int k : model.agents_per_rule)
    if (k < 0) throw std::invalid_argument("agents per rule must be nonnegative");
  if (agents() < 2) throw std::invalid_argument("need at least two agents");
  if (horizons.empty()) throw std::invalid_argument("need at least one horizon");
  for (int T : horizons) {
    if (T < 2) throw std::invalid_argument("horizons must be at least 2");
    BanditConfig b = bandit;
    b.t_split = t_split_for(T);
    b.validate(T);
  }
  if (graphs < 1) throw std::invalid_argument("need at least one graph");
  if (eval_pairs < 1) throw std::invalid_argument("need at least one evaluation pair");
  if (jobs < 1) throw std::invalid_argument("jobs must be positive");
  if (roster.empty()) throw std::invalid_argument("empty algorithm roster");
  learner.validate();
}

namespace {

double kv_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
}

long long kv_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
}

std::vector<int> kv_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    out.push_back(static_cast<int>(kv_int(key, tok)));
  }
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

}  // namespace

ExperimentConfig config_from_key_values(const std::map<std::string, std::string>& kv) {
  ExperimentConfig cfg;
  bool have_blocks = false;
  int n = -1;
  for (const auto& [key, v] : kv) {
    if (key == "n") n = static_cast<int>(kv_int(key, v));
    else if (key == "agents_per_rule") {
      const std::vector<int> blocks = kv_int_list(key, v);
      if (blocks.size() != 4) throw std::invalid_argument("agents_per_rule needs four counts");
      std::copy(blocks.begin(), blocks.end(), cfg.model.agents_per_rule.begin());
      have_blocks = true;
    } else if (key == "p_link") cfg.model.p_link = kv_double(key, v);
    else if (key == "weight_scale") cfg.model.weight_scale = kv_double(key, v);
    else if (key == "lambda") cfg.model.lambda = kv_double(key, v);
    else if (key == "confidence") cfg.model.confidence = kv_double(key, v);
    else if (key == "x0_low") cfg.model.x0_low = kv_double(key, v);
    else if (key == "x0_high") cfg.model.x0_high = kv_double(key, v);
    else if (key == "max_retries") cfg.model.max_retries = static_cast<int>(kv_int(key, v));
    else if (key == "horizons") cfg.horizons = kv_int_list(key, v);
    else if (key == "graphs") cfg.graphs = static_cast<int>(kv_int(key, v));
    else if (key == "eval_pairs") cfg.eval_pairs = static_cast<int>(kv_int(key, v));
    else if (key == "eps_m") cfg.bandit.eps_m = kv_double(key, v);
    else if (key == "eps_g") cfg.bandit.eps_g = kv_double(key, v);
    else if (key == "step_alpha") cfg.bandit.step_alpha = kv_double(key, v);
    else if (key == "n_iter") cfg.bandit.n_iter = static_cast<int>(kv_int(key, v));
    else if (key == "t_split") cfg.bandit.t_split = static_cast<int>(kv_int(key, v));
    else if (key == "b_g") cfg.bandit.b_g = static_cast<int>(kv_int(key, v));
    else if (key == "explore_p") cfg.bandit.explore_p = kv_double(key, v);
    else if (key == "eps_w") cfg.learner.eps_w = kv_double(key, v);
    else if (key == "eps_lambda") cfg.learner.eps_lambda = kv_double(key, v);
    else if (key == "eps_c") cfg.learner.eps_c = kv_double(key, v);
    else if (key == "err_floor") cfg.learner.err_floor = kv_double(key, v);
    else if (key == "tau_supp") cfg.learner.tau_supp = kv_double(key, v);
    else if (key == "roster") cfg.roster = parse_roster(v);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(v));
    else if (key == "jobs") cfg.jobs = static_cast<int>(kv_int(key, v));
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (n >= 0) {
    if (have_blocks) {
      if (n != cfg.model.agents())
        throw std::invalid_argument("n disagrees with the sum of agents_per_rule");
    } else {
      for (int k = 0; k < 4; ++k) cfg.model.agents_per_rule[k] = n / 4 + (k < n % 4 ? 1 : 0);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return config_from_key_values(read_key_values(in));
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  const auto& m = cfg.model;
  std::vector<int> blocks(m.agents_per_rule.begin(), m.agents_per_rule.end());
  std::string roster;
  for (std::size_t k = 0; k < cfg.roster.size(); ++k)
    roster += (k ? "," : "") + std::string(algorithm_name(cfg.roster[k]));
  os << "n = " << cfg.agents() << "\n"
     << "agents_per_rule = " << join(blocks) << "\n"
     << "p_link = " << format_double(m.p_link) << "\n"
     << "weight_scale = " << format_double(m.weight_scale) << "\n"
     << "lambda = " << format_double(m.lambda) << "\n"
     << "confidence = " << format_double(m.confidence) << "\n"
     << "x0_low = " << format_double(m.x0_low) << "\n"
     << "x0_high = " << format_double(m.x0_high) << "\n"
     << "max_retries = " << m.max_retries << "\n"
     << "horizons = " << join(cfg.horizons) << "\n"
     << "graphs = " << cfg.graphs << "\n"
     << "eval_pairs = " << cfg.eval_pairs << "\n"
     << "eps_m = " << format_double(cfg.bandit.eps_m) << "\n"
     << "eps_g = " << format_double(cfg.bandit.eps_g) << "\n"
     << "step_alpha = " << format_double(cfg.bandit.step_alpha) << "\n"
     << "n_iter = " << cfg.bandit.n_iter << "\n"
     << "t_split = " << cfg.bandit.t_split << "\n"
     << "b_g = " << cfg.bandit.b_g << "\n"
     << "explore_p = " << format_double(cfg.bandit.explore_p) << "\n"
     << "eps_w = " << format_double(cfg.learner.eps_w) << "\n"
     << "eps_lambda = " << format_double(cfg.learner.eps_lambda) << "\n"
     << "eps_c = " << format_double(cfg.learner.eps_c) << "\n"
     << "err_floor = " << format_double(cfg.learner.err_floor) << "\n"
     << "tau_supp = " << format_double(cfg.learner.tau_supp) << "\n"
     << "roster = " << roster << "\n"
     << "seed = " << cfg.seed << "\n";
}

MixedModel experiment_model(const ExperimentConfig& cfg, int g) {
  Rng rng = derive_rng({cfg.seed, kModelStream, static_cast<std::uint64_t>(g)});
  return sample_model(cfg.model, rng);
}

namespace {

// Algorithms that share one computation.
enum class Family { Bandit, Random, Ols, Ss, Gpr, BanditPlus };

Family family_of(Algorithm a) {
  switch (a) {
    case Algorithm::IE:
    case Algorithm::EG: return Family::Bandit;
    case Algorithm::RS: return Family::Random;
    case Algorithm::OLS: return Family::Ols;
    case Algorithm::SS: return Family::Ss;
    case Algorithm::GPR: return Family::Gpr;
    case Algorithm::IEp:
    case Algorithm::EGp: return Family::BanditPlus;
  }
  return Family::Bandit;
}

struct GraphData {
  MixedModel model;
  Trajectory full;
  MatrixXd eval_x0;
};

struct Task {
  int graph;
  int horizon;
  Family family;
  std::vector<std::size_t> slots;  // indices into ExperimentResult::runs
};

std::vector<RuleType> true_rules(const MixedModel& m) {
  std::vector<RuleType> out;
  for (const AgentRule& r : m.rules) out.push_back(r.rule);
  return out;
}

void score(RunRecord& rec, const GraphData& gd, const OneStepPredictor& predictor,
           const SignMatrix* adjacency, const std::vector<RuleType>* rules) {
  rec.rmse = prediction_rmse(predictor, gd.model, gd.eval_x0);
  if (adjacency) {
    const EdgeRates r = tpr_fpr(gd.model.graph, *adjacency);
    rec.tpr = r.tpr;
    rec.fpr = r.fpr;
    rec.adjacency = *adjacency;
  }
  if (rules) rec.accuracy = rule_accuracy(true_rules(gd.model), *rules);
}

void score_joint(RunRecord& rec, const GraphData& gd, const JointEstimate& est) {
  score(rec, gd, [&](const VectorXd& x, const VectorXd& x0) { return est.predict(x, x0); },
        &est.adjacency, &est.rules);
}

void run_task(const Task& task, const GraphData& gd, const ExperimentConfig& cfg,
              std::vector<RunRecord>& runs) {
  const Trajectory traj = gd.full.prefix(task.horizon);
  BanditConfig bcfg = cfg.bandit;
  bcfg.t_split = cfg.t_split_for(task.horizon);
  const std::uint64_t seed = derive_rng({cfg.seed, kRunStream, static_cast<std::uint64_t>(task.graph),
                                         static_cast<std::uint64_t>(task.horizon),
                                         static_cast<std::uint64_t>(task.family)})();

  auto slot = [&](Algorithm a) -> RunRecord* {
    for (std::size_t s : task.slots)
      if (runs[s].algorithm == a) return &runs[s];
    return nullptr;
  };

  switch (task.family) {
    case Family::Bandit:
    case Family::BanditPlus: {
      const bool plus = task.family == Family::BanditPlus;
      RunRecord* init_rec = slot(plus ? Algorithm::IEp : Algorithm::IE);
      RunRecord* iter_rec = slot(plus ? Algorithm::EGp : Algorithm::EG);
      const FinalSelection sel = plus ? FinalSelection::BestError : FinalSelection::QArgmax;
      if (iter_rec) {
        bool captured = false;
        BanditState init_state;
        const BanditObserver keep_first = [&](const BanditState& s) {
          if (!captured) {
            init_state = s;
            captured = true;
          }
        };
        const JointEstimate est = plus ? epsilon_greedy_plus(traj, bcfg, cfg.learner, seed, keep_first)
                                       : epsilon_greedy(traj, bcfg, cfg.learner, seed, keep_first);
        score_joint(*iter_rec, gd, est);
        if (init_rec) score_joint(*init_rec, gd, extract_estimate(init_state, sel));
      } else if (init_rec) {
        score_joint(*init_rec, gd, extract_estimate(initialize(traj, bcfg, cfg.learner, plus), sel));
      }
      break;
    }
    case Family::Random:
      score_joint(*slot(Algorithm::RS), gd, random_search(traj, bcfg, cfg.learner, seed));
      break;
    case Family::Ols:
    case Family::Ss: {
      const bool ss = task.family == Family::Ss;
      const LinearBaseline fit = ss ? fit_ss(traj, cfg.learner.tau_supp) : fit_ols(traj, cfg.learner.tau_supp);
      RunRecord& rec = *slot(ss ? Algorithm::SS : Algorithm::OLS);
      int failed = 0;
      for (SolveCode c : fit.status) failed += c != SolveCode::Optimal;
      if (ss && fit.fallbacks > 0) rec.status = "ols_fallback=" + std::to_string(fit.fallbacks);
      else if (failed > 0) rec.status = "solver_failures=" + std::to_string(failed);
      score(rec, gd, [&](const VectorXd& x, const VectorXd& x0) { return fit.predict(x, x0); },
            &fit.adjacency, nullptr);
      break;
    }
    case Family::Gpr: {
      const GprBaseline fit = fit_gpr(traj);
      score(*slot(Algorithm::GPR), gd,
            [&](const VectorXd& x, const VectorXd& x0) { return fit.predict(x, x0); }, nullptr,
            nullptr);
      break;
    }
  }
}

void mark_failed(RunRecord& rec, const std::string& what) {
  rec.status = "error: " + what;
  rec.tpr = rec.fpr = rec.rmse = kNaN;
  rec.accuracy.fill(kNaN);
  rec.adjacency.resize(0, 0);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const int Tmax = cfg.max_horizon();

  std::vector<GraphData> data;
  ExperimentResult result;
  for (int g = 0; g < cfg.graphs; ++g) {
    GraphData gd{experiment_model(cfg, g), Trajectory(), MatrixXd()};
    gd.full = simulate(gd.model, Tmax);
    Rng eval_rng = derive_rng({cfg.seed, kEvalStream, static_cast<std::uint64_t>(g)});
    gd.eval_x0 = draw_eval_states(cfg.eval_pairs, cfg.agents(), eval_rng);
    result.models.push_back(gd.model);
    data.push_back(std::move(gd));
  }

  std::vector<Task> tasks;
  for (int g = 0; g < cfg.graphs; ++g)
    for (int T : cfg.horizons) {
      std::vector<Task> local;
      for (Algorithm a : cfg.roster) {
        RunRecord rec;
        rec.graph = g + 1;
        rec.horizon = T;
        rec.algorithm = a;
        rec.tpr = rec.fpr = kNaN;
        rec.accuracy.fill(kNaN);
        result.runs.push_back(std::move(rec));
        const Family f = family_of(a);
        auto it = std::find_if(local.begin(), local.end(), [&](const Task& t) { return t.family == f; });
        if (it == local.end()) local.push_back(Task{g, T, f, {}}), it = local.end() - 1;
        it->slots.push_back(result.runs.size() - 1);
      }
      tasks.insert(tasks.end(), local.begin(), local.end());
    }

  // Slowest families first so the pool drains evenly.
  auto cost = [](Family f) {
    switch (f) {
      case Family::BanditPlus: return 0;
      case Family::Random: return 1;
      case Family::Bandit: return 2;
      default: return 3;
    }
  };
  std::stable_sort(tasks.begin(), tasks.end(),
                   [&](const Task& a, const Task& b) { return cost(a.family) < cost(b.family); });

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const Task& task = tasks[k];
      try {
        run_task(task, data[static_cast<std::size_t>(task.graph)], cfg, result.runs);
      } catch (const std::exception& e) {
        for (std::size_t s : task.slots) mark_failed(result.runs[s], e.what());
      }
    }
  };
  const int workers = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

namespace {

struct MetricValue {
  std::string name;
  double value;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<MetricValue> metrics_of(const RunRecord& rec) {
  std::vector<MetricValue> out;
  if (has_topology(rec.algorithm)) {
    out.push_back({"tpr", rec.tpr});
    out.push_back({"fpr", rec.fpr});
  }
  out.push_back({"rmse", rec.rmse});
  if (has_rules(rec.algorithm))
    for (RuleType r : kAllRules) {
      const double v = rec.accuracy[static_cast<std::size_t>(arm_index(r))];
      if (!std::isnan(v) || rec.status.rfind("error", 0) == 0)
        out.push_back({"acc_" + lower(rule_name(r)), v});
    }
  return out;
}

std::string value_text(double v) { return std::isnan(v) ? "" : format_double(v); }

}  // namespace

void write_runs_csv(std::ostream& os, const ExperimentResult& result) {
  write_csv_row(os, {"run", "algorithm", "T", "metric", "value", "status"});
  for (const RunRecord& rec : result.runs)
    for (const MetricValue& m : metrics_of(rec))
      write_csv_row(os, {std::to_string(rec.graph), std::string(algorithm_name(rec.algorithm)),
                         std::to_string(rec.horizon), m.name, value_text(m.value), rec.status});
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void write_summary_csv(std::ostream& os, const ExperimentResult& result,
                       const std::vector<Algorithm>& roster, const std::vector<int>& horizons) {
  write_csv_row(os, {"algorithm", "T", "metric", "count", "mean", "median", "min", "q1", "q3", "max"});
  for (Algorithm a : roster)
    for (int T : horizons) {
      std::vector<std::string> names;
      std::map<std::string, std::vector<double>> values;
      for (const RunRecord& rec : result.runs) {
        if (rec.algorithm != a || rec.horizon != T) continue;
        for (const MetricValue& m : metrics_of(rec)) {
          if (!values.count(m.name)) names.push_back(m.name);
          auto& v = values[m.name];
          if (std::isfinite(m.value)) v.push_back(m.value);
        }
      }
      for (const std::string& name : names) {
        const std::vector<double>& v = values[name];
        double sum = 0.0;
        for (double x : v) sum += x;
        const double mean = v.empty() ? kNaN : sum / static_cast<double>(v.size());
        write_csv_row(os, {std::string(algorithm_name(a)), std::to_string(T), name,
                           std::to_string(v.size()), value_text(mean), value_text(quantile(v, 0.5)),
                           value_text(quantile(v, 0.0)), value_text(quantile(v, 0.25)),
                           value_text(quantile(v, 0.75)), value_text(quantile(v, 1.0))});
      }
    }
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out.precision(17);
  return out;
}

}  // namespace

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "runs.csv");
    write_runs_csv(out, result);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(out, result, cfg.roster, cfg.horizons);
  }
  {
    auto out = open_out(dir / "config.txt");
    write_config(out, cfg);
  }
  if (!cfg.write_artifacts) return;
  fs::create_directories(dir / "graphs");
  fs::create_directories(dir / "estimates");
  for (std::size_t g = 0; g < result.models.size(); ++g) {
    const std::string stem = "graph_" + std::to_string(g + 1);
    auto out = open_out(dir / "graphs" / (stem + ".txt"));
    write_edge_list(out, result.models[g].graph);
    auto rules = open_out(dir / "graphs" / (stem + "_rules.csv"));
    write_csv_row(rules, {"agent", "rule"});
    for (std::size_t i = 0; i < result.models[g].rules.size(); ++i)
      write_csv_row(rules, {std::to_string(i + 1), std::string(rule_name(result.models[g].rules[i].rule))});
  }
  for (const RunRecord& rec : result.runs) {
    if (rec.adjacency.size() == 0) continue;
    const std::string name = "graph_" + std::to_string(rec.graph) + "_T" + std::to_string(rec.horizon) +
                             "_" + std::string(algorithm_name(rec.algorithm)) + ".csv";
    auto out = open_out(dir / "estimates" / name);
    write_adjacency_csv(out, rec.adjacency);
  }
}

}  // namespace opinionlearn
