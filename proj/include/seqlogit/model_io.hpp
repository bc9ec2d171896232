#pragma once

// LP-format export of the selection problem and JSON reports.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "seqlogit/selector.hpp"

namespace seqlogit {

enum class IndicatorEncoding { big_m, sos1 };

std::string to_string(IndicatorEncoding e);
IndicatorEncoding parse_indicator_encoding(const std::string& s);

struct LpExportOptions {
  Approx approx = Approx::pwl;  // quad or pwl
  IndicatorEncoding encoding = IndicatorEncoding::big_m;
  double big_m = 100.0;
};

struct LpExportStats {
  std::size_t tangent_rows = 0;
  std::size_t indicator_rows = 0;
  double objective_constant = 0.0;
};

/// Writes the problem in CPLEX LP format. Variables are named w_j_k, b_k,
/// t_i_k and z_j (1-based); constant objective terms go into a
/// "\ objective constant:" comment line.
LpExportStats export_lp(const SelectionProblem& prob, const LpExportOptions& opts, std::ostream& out);
LpExportStats export_lp(const SelectionProblem& prob, const LpExportOptions& opts, const std::string& path);

/// Minimal reader for the LP files written above: objective (linear part,
/// quadratic bracket and the constant comment), constraints and bounds.
struct LpFileModel {
  struct Row {
    std::string name;
    std::map<std::string, double> terms;
    RowSense sense = RowSense::less_equal;
    double rhs = 0.0;
  };
  struct Bound {
    double lower = 0.0;
    double upper = LpProblem::inf;
  };

  double objective_constant = 0.0;
  std::map<std::string, double> linear;
  /// Coefficients of x*y (x <= y lexicographically) after the "/ 2" scaling.
  std::map<std::pair<std::string, std::string>, double> quadratic;
  std::vector<Row> rows;
  std::map<std::string, Bound> bounds;
  std::vector<std::string> binaries;
  std::vector<std::vector<std::string>> sos1_sets;

  double objective(const std::map<std::string, double>& x) const;
  double max_violation(const std::map<std::string, double>& x) const;
};

LpFileModel parse_lp(std::istream& in);
LpFileModel parse_lp_file(const std::string& path);

/// Report as an insertion-ordered JSON object.
nlohmann::ordered_json report_to_json(const SelectionReport& rep);

/// Canonical text form: two-space indentation, floats as %.17g, non-finite
/// numbers as null, LF line endings.
std::string canonical_dump(const nlohmann::ordered_json& j);

void write_report(const SelectionReport& rep, std::ostream& out);
void write_report(const SelectionReport& rep, const std::string& path);

/// One-line table-style summary: method criterion_value objval |S| time_s.
std::string summary_line(const SelectionReport& rep);

std::string format_number(double v);

}  // namespace seqlogit
