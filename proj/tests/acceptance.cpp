// Acceptance runner: one PASS/FAIL line per criterion.
//
// Exit status is nonzero when a deterministic property check (1-5, 8) fails
// or anything throws. The ensemble trend checks (6, 7) only affect the exit
// status under --strict.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "opinionlearn/experiment.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"

using namespace opinionlearn;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// -- 1 ---------------------------------------------------------------------
Verdict degeneracy() {
  const auto t0 = Clock::now();
  const scenarios::DegeneracyGap g = scenarios::degeneracy_gap(10, 1000, 1);
  const double secs = seconds_since(t0);
  const double worst = std::max({g.fj, g.repell, g.hk});
  return {worst <= 1e-12 && secs < 1.0,
          "max gap fj=" + fmt("%.2e", g.fj) + " repell=" + fmt("%.2e", g.repell) + " hk=" + fmt("%.2e", g.hk) +
              " over 1000 states, n=10 (" + fmt("%.2f", secs) + " s)"};
}

// -- 2 ---------------------------------------------------------------------
Verdict recovery() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (RuleType r : {RuleType::DeGroot, RuleType::FJ, RuleType::Repell}) {
    int good_seeds = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const scenarios::RecoveryOutcome o = scenarios::recovery(r, seed);
      worst = std::max(worst, o.worst);
      good_seeds += o.all_feasible && o.agents > 0 && o.exact == o.agents;
    }
    ok = ok && good_seeds == 20;
    detail += std::string(rule_name(r)) + " " + std::to_string(good_seeds) + "/20 (max err " +
              fmt("%.1e", worst) + ") ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 60.0, detail + "n=10, T=12 (" + fmt("%.2f", secs) + " s)"};
}

// -- 3 ---------------------------------------------------------------------
Verdict hk_bound() {
  const auto t0 = Clock::now();
  int bound = 0, exact = 0, informative = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const scenarios::HkOutcome o = scenarios::hk_bound(seed);
    bound += o.bound_holds;
    exact += o.train_gap == 0.0;
    informative += o.outside_samples > 0;
  }
  const double secs = seconds_since(t0);
  return {bound == 20 && exact == 20 && secs < 10.0,
          "bound " + std::to_string(bound) + "/20, exact training fit " + std::to_string(exact) +
              "/20, instances with an excluded neighbor " + std::to_string(informative) + "/20 (" +
              fmt("%.2f", secs) + " s)"};
}

// -- 4 ---------------------------------------------------------------------
Verdict solver_oracles() {
  const auto t0 = Clock::now();
  int l1_ok = 0, lsq_ok = 0;
  double l1_gap = 0.0, lsq_gap = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = derive_rng({seed, 0xacc, 1});
    const LinearConstraintSet c = instances::random_l1(rng);
    const auto ref = oracle::min_l1_value(c);
    const SolveResult r = min_l1(c.dim(), c);
    if (ref && r.status.optimal() && oracle::feasible(r.y, c, 1e-8)) {
      const double gap = std::abs(r.y.lpNorm<1>() - *ref);
      l1_gap = std::max(l1_gap, gap);
      l1_ok += gap <= 1e-6;
    }
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = derive_rng({seed, 0xacc, 2});
    const instances::LsqInstance p = instances::random_lsq(rng);
    const auto ref = oracle::lsq_value(p.X, p.b, p.cons);
    const SolveResult r = constrained_lsq(p.X, p.b, p.cons);
    if (ref && r.status.optimal() && oracle::feasible(r.y, p.cons, 1e-8)) {
      const double gap = std::abs((p.X * r.y - p.b).squaredNorm() - *ref);
      lsq_gap = std::max(lsq_gap, gap);
      lsq_ok += gap <= 1e-6;
    }
  }
  const double secs = seconds_since(t0);
  return {l1_ok == 100 && lsq_ok == 100 && secs < 60.0,
          "min_l1 " + std::to_string(l1_ok) + "/100 (max gap " + fmt("%.1e", l1_gap) + "), constrained_lsq " +
              std::to_string(lsq_ok) + "/100 (max gap " + fmt("%.1e", lsq_gap) + ") (" + fmt("%.2f", secs) +
              " s)"};
}

// -- 5 ---------------------------------------------------------------------
Verdict bandit_invariants() {
  const auto t0 = Clock::now();
  int mono = 0, carry = 0, rs = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const scenarios::BanditInvariants inv = scenarios::bandit_invariants(seed, 10);
    mono += inv.best_err_monotone && inv.iterations_seen == 20;
    carry += inv.carry_over;
    rs += inv.rs_identity;
  }
  const double secs = seconds_since(t0);
  return {mono == 5 && carry == 5 && rs == 5 && secs < 300.0,
          "monotone best error " + std::to_string(mono) + "/5, carry-over " + std::to_string(carry) +
              "/5, RS trace identity " + std::to_string(rs) + "/5 (" + fmt("%.2f", secs) + " s)"};
}

// -- 6, 7 ------------------------------------------------------------------
struct Ensemble {
  const ExperimentResult& result;

  std::vector<double> values(Algorithm a, int T, const std::function<double(const RunRecord&)>& f) const {
    std::vector<double> out;
    for (const RunRecord& r : result.runs)
      if (r.algorithm == a && r.horizon == T) {
        const double v = f(r);
        if (std::isfinite(v)) out.push_back(v);
      }
    return out;
  }
  static double mean(const std::vector<double>& v) {
    return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  }
  double mean_of(Algorithm a, int T, const std::function<double(const RunRecord&)>& f) const {
    return mean(values(a, T, f));
  }
  double median_of(Algorithm a, int T, const std::function<double(const RunRecord&)>& f) const {
    const std::vector<double> v = values(a, T, f);
    return v.empty() ? std::nan("") : quantile(v, 0.5);
  }
};

const auto kTpr = [](const RunRecord& r) { return r.tpr; };
const auto kFpr = [](const RunRecord& r) { return r.fpr; };
const auto kRmse = [](const RunRecord& r) { return r.rmse; };

std::vector<Verdict> trends(const ExperimentConfig& cfg, const ExperimentResult& res) {
  const Ensemble e{res};
  std::vector<Verdict> out;
  const std::vector<int>& Ts = cfg.horizons;
  const int Tlast = Ts.back();
  const int Tfirst = Ts.front();

  {  // (a)
    bool ok = true;
    std::string d;
    for (int T : Ts) {
      const double tg = e.mean_of(Algorithm::EG, T, kTpr), to = e.mean_of(Algorithm::OLS, T, kTpr);
      const double fg = e.mean_of(Algorithm::EG, T, kFpr), fo = e.mean_of(Algorithm::OLS, T, kFpr);
      ok = ok && tg >= to && fg <= fo;
      d += "T=" + std::to_string(T) + " TPR eG " + fmt("%.3f", tg) + " vs OLS " + fmt("%.3f", to) + ", FPR eG " +
           fmt("%.3f", fg) + " vs OLS " + fmt("%.3f", fo) + "; ";
    }
    out.push_back({ok, "(a) " + d});
  }
  {  // (b)
    std::map<Algorithm, double> med;
    for (Algorithm a : {Algorithm::IE, Algorithm::EG, Algorithm::RS, Algorithm::SS, Algorithm::GPR, Algorithm::OLS})
      med[a] = e.median_of(a, Tlast, kRmse);
    const double low = std::max({med[Algorithm::IE], med[Algorithm::EG], med[Algorithm::RS]});
    const double mid_lo = std::min(med[Algorithm::SS], med[Algorithm::GPR]);
    const double mid_hi = std::max(med[Algorithm::SS], med[Algorithm::GPR]);
    const bool ok = low < mid_lo && mid_hi < med[Algorithm::OLS];
    std::string d = "(b) median RMSE at T=" + std::to_string(Tlast) + ":";
    for (const auto& [a, v] : med) d += " " + std::string(algorithm_name(a)) + " " + fmt("%.3f", v);
    out.push_back({ok, d});
  }
  {  // (c)
    int kept = 0;
    std::string d = "(c) eG accuracy T=" + std::to_string(Tfirst) + " -> T=" + std::to_string(Tlast) + ":";
    for (RuleType r : kAllRules) {
      const std::size_t k = static_cast<std::size_t>(arm_index(r));
      const auto acc = [k](const RunRecord& rec) { return rec.accuracy[k]; };
      const double a0 = e.mean_of(Algorithm::EG, Tfirst, acc), a1 = e.mean_of(Algorithm::EG, Tlast, acc);
      kept += a1 >= a0;
      d += " " + std::string(rule_name(r)) + " " + fmt("%.3f", a0) + "->" + fmt("%.3f", a1);
    }
    out.push_back({kept >= 3, d + " (" + std::to_string(kept) + "/4 non-decreasing)"});
  }
  {  // (d)
    bool ok = true;
    std::string d = "(d) mean RMSE by T:";
    for (Algorithm a : cfg.roster) {
      d += " " + std::string(algorithm_name(a));
      double prev = INFINITY;
      for (int T : Ts) {
        const double v = e.mean_of(a, T, kRmse);
        ok = ok && v <= prev;
        prev = v;
        d += (T == Tfirst ? " " : "/") + fmt("%.3f", v);
      }
    }
    out.push_back({ok, d});
  }
  {  // 7
    bool ok = true;
    std::string d;
    for (int T : Ts) {
      const double tp = e.mean_of(Algorithm::EGp, T, kTpr), ti = e.mean_of(Algorithm::IEp, T, kTpr);
      const double rp = e.median_of(Algorithm::EGp, T, kRmse), ri = e.median_of(Algorithm::IEp, T, kRmse);
      ok = ok && tp > ti && rp <= ri;
      d += "T=" + std::to_string(T) + " TPR eGp " + fmt("%.3f", tp) + " vs IEp " + fmt("%.3f", ti) +
           ", median RMSE eGp " + fmt("%.3f", rp) + " vs IEp " + fmt("%.3f", ri) + "; ";
    }
    out.push_back({ok, d});
  }
  return out;
}

// -- 8 ---------------------------------------------------------------------
std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    out[fs::relative(entry.path(), root).generic_string()] = os.str();
  }
  return out;
}

Verdict compare_trees(const fs::path& a, const fs::path& b, int jobs_a, int jobs_b) {
  const auto ta = tree_contents(a), tb = tree_contents(b);
  int csv = 0, differ = 0;
  for (const auto& [name, body] : ta) {
    if (fs::path(name).extension() == ".csv") ++csv;
    const auto it = tb.find(name);
    if (it == tb.end() || it->second != body) ++differ;
  }
  for (const auto& [name, body] : tb)
    if (!ta.count(name)) ++differ;
  return {differ == 0 && csv > 0,
          std::to_string(ta.size()) + " files (" + std::to_string(csv) + " CSV) compared between --jobs " +
              std::to_string(jobs_a) + " and --jobs " + std::to_string(jobs_b) + ", " + std::to_string(differ) +
              " differ"};
}

void report(int id, const Verdict& v) {
  std::printf("criterion %d: %s  %s\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string out = "acceptance_out";
  std::string only;
  std::uint64_t seed = 1;
  int jobs = 1, jobs_alt = 2;
  bool strict = false;
  app.add_option("--out", out, "Directory for the ensemble outputs");
  app.add_option("--seed", seed, "Master seed of the ensemble runs");
  app.add_option("--jobs", jobs, "Worker threads of the first ensemble run");
  app.add_option("--jobs-alt", jobs_alt, "Worker threads of the repeat run");
  app.add_option("--criteria", only, "Comma-separated subset, e.g. 1,2,4");
  app.add_flag("--strict", strict, "Nonzero exit on any FAIL, trends included");
  CLI11_PARSE(app, argc, argv);

  std::set<int> wanted;
  if (only.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8};
  else {
    std::stringstream ss(only);
    std::string tok;
    while (std::getline(ss, tok, ',')) wanted.insert(std::stoi(tok));
  }

  bool property_failed = false, trend_failed = false;
  try {
    using Check = Verdict (*)();
    const std::map<int, Check> properties{
        {1, degeneracy}, {2, recovery}, {3, hk_bound}, {4, solver_oracles}, {5, bandit_invariants}};
    for (const auto& [id, fn] : properties) {
      if (!wanted.count(id)) continue;
      const Verdict v = fn();
      property_failed = property_failed || !v.pass;
      report(id, v);
    }

    if (wanted.count(6) || wanted.count(7) || wanted.count(8)) {
      ExperimentConfig cfg;
      cfg.seed = seed;
      cfg.jobs = jobs;
      cfg.out_dir = (fs::path(out) / ("jobs" + std::to_string(jobs))).string();
      fs::remove_all(cfg.out_dir);
      const auto t0 = Clock::now();
      const ExperimentResult res = run_experiment(cfg);
      write_outputs(cfg, res);
      const double secs = seconds_since(t0);

      if (wanted.count(6) || wanted.count(7)) {
        const std::vector<Verdict> t = trends(cfg, res);
        const std::string timing = " (ensemble " + fmt("%.0f", secs) + " s)";
        if (wanted.count(6)) {
          bool ok = secs < 1800.0;
          std::string d;
          for (int k = 0; k < 4; ++k) {
            ok = ok && t[k].pass;
            d += std::string(t[k].pass ? "[ok] " : "[no] ") + t[k].detail + " | ";
          }
          trend_failed = trend_failed || !ok;
          report(6, {ok, d + timing});
        }
        if (wanted.count(7)) {
          const Verdict v{t[4].pass && secs < 1800.0, t[4].detail + timing};
          trend_failed = trend_failed || !v.pass;
          report(7, v);
        }
      }

      if (wanted.count(8)) {
        ExperimentConfig again = cfg;
        again.jobs = jobs_alt;
        again.out_dir = (fs::path(out) / ("jobs" + std::to_string(jobs_alt) + "_repeat")).string();
        fs::remove_all(again.out_dir);
        write_outputs(again, run_experiment(again));
        const Verdict v = compare_trees(cfg.out_dir, again.out_dir, jobs, jobs_alt);
        property_failed = property_failed || !v.pass;
        report(8, v);
      }
    }
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 2;
  }
  if (property_failed) return 1;
  if (strict && trend_failed) return 1;
  return 0;
}
