#include "opinionlearn/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace opinionlearn {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

int to_int(const std::string& s, int line) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(line, "expected an integer, got '" + s + "'");
  return v;
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(line, "expected a number, got '" + s + "'");
}

}  // namespace

void write_edge_list(std::ostream& os, const SignedGraph& g) {
  const int n = g.size();
  os << "n=" << n << "\n";
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.at(i, j) != 0) os << i + 1 << " " << j + 1 << " " << g.at(i, j) << "\n";
}

SignedGraph read_edge_list(std::istream& is) {
  std::string line;
  int lineno = 0;
  int n = -1;
  SignMatrix a;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (n < 0) {
      if (t.rfind("n=", 0) != 0) fail(lineno, "expected header n=<count>");
      n = to_int(trim(t.substr(2)), lineno);
      if (n <= 0) fail(lineno, "agent count must be positive");
      a = SignMatrix::Identity(n, n);
      continue;
    }
    std::istringstream ss(t);
    std::string si, sj, ssign, extra;
    if (!(ss >> si >> sj >> ssign) || (ss >> extra)) fail(lineno, "expected 'i j sign'");
    const int i = to_int(si, lineno) - 1;
    const int j = to_int(sj, lineno) - 1;
    const int s = to_int(ssign, lineno);
    if (i < 0 || j < 0 || i >= n || j >= n) fail(lineno, "agent index out of range");
    if (i == j) fail(lineno, "self-loops are implicit");
    if (s != 1 && s != -1) fail(lineno, "sign must be 1 or -1");
    a(i, j) = a(j, i) = s;
  }
  if (n < 0) fail(lineno, "missing header n=<count>");
  return SignedGraph(a);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) os << ',';
    os << csv_escape(fields[k]);
  }
  os << "\r\n";
}

std::vector<std::vector<std::string>> read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;  // current record has content
  char c;
  while (is.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          field += '"';
          is.get(c);
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && is.peek() == '\n') is.get(c);
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_adjacency_csv(std::ostream& os, const SignMatrix& a) {
  std::vector<std::string> fields;
  for (Eigen::Index j = 0; j < a.cols(); ++j) fields.push_back("a" + std::to_string(j + 1));
  write_csv_row(os, fields);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    fields.clear();
    for (Eigen::Index j = 0; j < a.cols(); ++j) fields.push_back(std::to_string(a(i, j)));
    write_csv_row(os, fields);
  }
}

SignMatrix read_adjacency_csv(std::istream& is) {
  const auto rows = read_csv(is);
  if (rows.empty()) throw ParseError("adjacency CSV is empty");
  const int n = static_cast<int>(rows[0].size());
  if (static_cast<int>(rows.size()) != n + 1) throw ParseError("adjacency CSV must have n data rows");
  SignMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i + 1].size()) != n) fail(i + 2, "wrong number of columns");
    for (int j = 0; j < n; ++j) {
      const int v = to_int(trim(rows[i + 1][j]), i + 2);
      if (v < -1 || v > 1) fail(i + 2, "entries must be -1, 0 or 1");
      a(i, j) = v;
    }
  }
  return a;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const MatrixXd& s = traj.states();
  std::vector<std::string> fields;
  for (Eigen::Index j = 0; j < s.cols(); ++j) fields.push_back("x" + std::to_string(j + 1));
  write_csv_row(os, fields);
  for (Eigen::Index t = 0; t < s.rows(); ++t) {
    fields.clear();
    for (Eigen::Index j = 0; j < s.cols(); ++j) fields.push_back(format_double(s(t, j)));
    write_csv_row(os, fields);
  }
}

Trajectory read_trajectory_csv(std::istream& is) {
  const auto rows = read_csv(is);
  if (rows.size() < 3) throw ParseError("trajectory CSV needs a header and at least two states");
  const std::size_t n = rows[0].size();
  MatrixXd s(rows.size() - 1, n);
  for (std::size_t t = 1; t < rows.size(); ++t) {
    const int lineno = static_cast<int>(t) + 1;
    if (rows[t].size() != n) fail(lineno, "wrong number of columns");
    for (std::size_t j = 0; j < n; ++j)
      s(static_cast<Eigen::Index>(t - 1), static_cast<Eigen::Index>(j)) = to_double(trim(rows[t][j]), lineno);
  }
  return Trajectory(std::move(s));
}

std::map<std::string, std::string> read_key_values(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string t = trim(std::string_view(line).substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) fail(lineno, "empty key");
    out[std::move(key)] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

}  // namespace opinionlearn
