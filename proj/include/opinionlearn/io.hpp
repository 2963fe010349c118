#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "opinionlearn/dynamics.hpp"
#include "opinionlearn/graph.hpp"

namespace opinionlearn {

/// Thrown on malformed input files; message carries the line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Header `n=<count>`, then one `i j sign` line per edge with 1-based i < j.
void write_edge_list(std::ostream& os, const SignedGraph& g);
SignedGraph read_edge_list(std::istream& is);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);
/// Parses quoted fields, doubled quotes and embedded newlines.
std::vector<std::vector<std::string>> read_csv(std::istream& is);

/// %.17g, enough to round-trip any double.
std::string format_double(double v);

/// Header a1..an, then n rows of {-1,0,1}.
void write_adjacency_csv(std::ostream& os, const SignMatrix& a);
SignMatrix read_adjacency_csv(std::istream& is);

/// Header x1..xn, then one row per time step.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
Trajectory read_trajectory_csv(std::istream& is);

/// `key = value` lines; `#` starts a comment; blank lines ignored. Later keys
/// override earlier ones.
std::map<std::string, std::string> read_key_values(std::istream& is);

}  // namespace opinionlearn
