#include "seqlogit/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seqlogit {

std::string to_string(IndicatorEncoding e) { return e == IndicatorEncoding::big_m ? "bigm" : "sos1"; }

IndicatorEncoding parse_indicator_encoding(const std::string& s) {
  if (s == "bigm" || s == "big-m") return IndicatorEncoding::big_m;
  if (s == "sos1" || s == "sos") return IndicatorEncoding::sos1;
  throw std::invalid_argument("unknown indicator encoding '" + s + "' (expected bigm or sos1)");
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

std::string w_name(Eigen::Index j, int k) { return "w_" + std::to_string(j + 1) + "_" + std::to_string(k + 1); }
std::string b_name(int k) { return "b_" + std::to_string(k + 1); }
std::string t_name(Eigen::Index i, int k) { return "t_" + std::to_string(i + 1) + "_" + std::to_string(k + 1); }
std::string z_name(Eigen::Index j) { return "z_" + std::to_string(j + 1); }
std::string u_name(Eigen::Index j) { return "u_" + std::to_string(j + 1); }

// Accumulates "+ c name" terms and wraps lines well under the usual
// 510-character LP line limit.
class ExprWriter {
 public:
  explicit ExprWriter(std::ostream& out) : out_(out) {}

  void term(double coef, const std::string& var) {
    if (coef == 0.0) return;
    emit((coef < 0 ? "- " : "+ ") + format_number(std::abs(coef)) + " " + var);
  }
  void first_term(double coef, const std::string& var) {
    if (coef == 0.0) return;
    if (empty_ && coef > 0)
      emit(format_number(coef) + " " + var);
    else
      term(coef, var);
  }
  void raw(const std::string& s) { emit(s); }
  bool empty() const { return empty_; }
  void newline() {
    out_ << '\n';
    width_ = 0;
  }

 private:
  void emit(const std::string& s) {
    if (width_ > 200) {
      out_ << "\n   ";
      width_ = 3;
    }
    out_ << ' ' << s;
    width_ += s.size() + 1;
    empty_ = false;
  }

  std::ostream& out_;
  std::size_t width_ = 0;
  bool empty_ = true;
};

}  // namespace

LpExportStats export_lp(const SelectionProblem& prob, const LpExportOptions& opts, std::ostream& out) {
  if (opts.approx == Approx::exact) throw std::invalid_argument("export: the exact loss has no LP form; use quad or pwl");
  if (!(opts.big_m > 0.0)) throw std::invalid_argument("export: big-M must be positive");
  const TangentSet& tset = prob.tangents;
  if (opts.approx == Approx::pwl && tset.size() == 0) throw std::invalid_argument("export: pwl needs a tangent set");

  const Eigen::MatrixXd& X = prob.data.X;
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const int m = prob.m();
  const Eigen::MatrixXi& psi = prob.encoding.psi;
  const double Fm = prob.penalty * m;

  LpExportStats stats;
  std::size_t active = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) active += psi(i, k) != 0 ? 1 : 0;
  stats.objective_constant = Fm;
  if (opts.approx == Approx::quad) stats.objective_constant += 2.0 * std::log(2.0) * static_cast<double>(active);

  out << "\\ seqlogit " << to_string(opts.approx) << " selection model, " << to_string(prob.criterion) << ", "
      << to_string(prob.encoding.direction) << " direction\n";
  out << "\\ n=" << n << " p=" << p << " m=" << m << " F=" << format_number(prob.penalty);
  if (opts.approx == Approx::pwl) out << " tangents=" << tset.size();
  out << '\n';
  if (opts.encoding == IndicatorEncoding::big_m)
    out << "\\ indicators: big-M rows with M=" << format_number(opts.big_m)
        << ", so |w_j_k| <= M whenever z_j = 1 (the SOS1 variant leaves w unbounded)\n";
  else
    out << "\\ indicators: SOS1 sets {u_j, w_j_k} with u_j = 1 - z_j; w unbounded\n";
  out << "\\ objective constant: " << format_number(stats.objective_constant) << '\n';

  out << "Minimize\n obj:";
  {
    ExprWriter obj(out);
    if (opts.approx == Approx::pwl) {
      for (Eigen::Index i = 0; i < n; ++i)
        for (int k = 0; k < m; ++k)
          if (psi(i, k) != 0) obj.first_term(2.0, t_name(i, k));
    } else {
      // 2 * sum (v^2/8 - v/2 + log 2) with v = psi * (x.w + b) and psi^2 = 1.
      for (int k = 0; k < m; ++k) {
        for (Eigen::Index j = 0; j <= p; ++j) {
          double lin = 0.0;
          for (Eigen::Index i = 0; i < n; ++i)
            if (psi(i, k) != 0) lin -= psi(i, k) * (j < p ? X(i, j) : 1.0);
          obj.first_term(lin, j < p ? w_name(j, k) : b_name(k));
        }
      }
    }
    for (Eigen::Index j = 0; j < p; ++j) obj.first_term(Fm, z_name(j));
    if (opts.approx == Approx::quad) {
      obj.raw("+ [");
      bool first = true;
      for (int k = 0; k < m; ++k) {
        // Gram matrix of the augmented rows (x_i, 1) over active i.
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(p + 1, p + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
          if (psi(i, k) == 0) continue;
          Eigen::VectorXd row(p + 1);
          row.head(p) = X.row(i).transpose();
          row(p) = 1.0;
          G.selfadjointView<Eigen::Lower>().rankUpdate(row);
        }
        G = G.selfadjointView<Eigen::Lower>();
        auto name = [&](Eigen::Index j) { return j < p ? w_name(j, k) : b_name(k); };
        // (1/4) theta' G theta inside "[ ... ] / 2".
        for (Eigen::Index a = 0; a <= p; ++a) {
          for (Eigen::Index b = a; b <= p; ++b) {
            const double c = a == b ? 0.5 * G(a, a) : G(a, b);
            if (c == 0.0) continue;
            const std::string var = a == b ? name(a) + " ^ 2" : name(a) + " * " + name(b);
            if (first && c > 0)
              obj.raw(format_number(c) + " " + var);
            else
              obj.term(c, var);
            first = false;
          }
        }
      }
      obj.raw("] / 2");
    }
    if (obj.empty()) obj.raw("0 " + b_name(0));
    obj.newline();
  }

  out << "Subject To\n";
  if (opts.approx == Approx::pwl) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int k = 0; k < m; ++k) {
        if (psi(i, k) == 0) continue;
        const double s = psi(i, k);
        for (Eigen::Index l = 0; l < tset.size(); ++l) {
          const double a = tset.slopes(l);
          out << " c_" << i + 1 << '_' << k + 1 << '_' << l + 1 << ':';
          ExprWriter row(out);
          row.first_term(1.0, t_name(i, k));
          for (Eigen::Index j = 0; j < p; ++j) row.term(-a * s * X(i, j), w_name(j, k));
          row.term(-a * s, b_name(k));
          row.raw(">= " + format_number(tset.offsets(l)));
          row.newline();
          ++stats.tangent_rows;
        }
      }
    }
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (opts.encoding == IndicatorEncoding::big_m) {
      for (int k = 0; k < m; ++k) {
        out << " up_" << j + 1 << '_' << k + 1 << ": " << w_name(j, k) << " - " << format_number(opts.big_m) << ' '
            << z_name(j) << " <= 0\n";
        out << " lo_" << j + 1 << '_' << k + 1 << ": -" << w_name(j, k) << " - " << format_number(opts.big_m) << ' '
            << z_name(j) << " <= 0\n";
        stats.indicator_rows += 2;
      }
    } else {
      out << " link_" << j + 1 << ": " << u_name(j) << " + " << z_name(j) << " = 1\n";
      ++stats.indicator_rows;
    }
  }
  if (p == 0 && opts.approx == Approx::quad) out << " dummy: " << b_name(0) << " - " << b_name(0) << " = 0\n";

  out << "Bounds\n";
  for (int k = 0; k < m; ++k) {
    for (Eigen::Index j = 0; j < p; ++j) out << ' ' << w_name(j, k) << " free\n";
    out << ' ' << b_name(k) << " free\n";
  }
  if (opts.approx == Approx::pwl)
    for (Eigen::Index i = 0; i < n; ++i)
      for (int k = 0; k < m; ++k)
        if (psi(i, k) != 0) out << ' ' << t_name(i, k) << " free\n";
  if (opts.encoding == IndicatorEncoding::sos1)
    for (Eigen::Index j = 0; j < p; ++j) out << " 0 <= " << u_name(j) << " <= 1\n";

  if (p > 0) {
    out << "Binary\n";
    for (Eigen::Index j = 0; j < p; ++j) out << ' ' << z_name(j) << '\n';
  }
  if (opts.encoding == IndicatorEncoding::sos1 && p > 0) {
    out << "SOS\n";
    for (Eigen::Index j = 0; j < p; ++j)
      for (int k = 0; k < m; ++k)
        out << " s_" << j + 1 << '_' << k + 1 << ": S1 :: " << u_name(j) << ":1 " << w_name(j, k) << ":2\n";
  }
  out << "End\n";
  if (!out) throw std::runtime_error("export: write failed");
  return stats;
}

LpExportStats export_lp(const SelectionProblem& prob, const LpExportOptions& opts, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return export_lp(prob, opts, out);
}

// ---------------------------------------------------------------------------
// LP reader

namespace {

double parse_double(const std::string& tok) {
  if (tok == "inf" || tok == "+inf" || tok == "infinity" || tok == "+infinity") return LpProblem::inf;
  if (tok == "-inf" || tok == "-infinity") return -LpProblem::inf;
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) throw std::runtime_error("lp: bad number '" + tok + "'");
  return v;
}

bool is_number(const std::string& tok) {
  if (tok.empty()) return false;
  const char c = tok[0];
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
  if ((c == '-' || c == '+') && tok.size() > 1)
    return std::isdigit(static_cast<unsigned char>(tok[1])) || tok[1] == '.' || tok.substr(1, 3) == "inf";
  return tok == "inf" || tok == "infinity";
}

bool is_sense(const std::string& tok) { return tok == "<=" || tok == ">=" || tok == "=" || tok == "<" || tok == ">"; }

RowSense to_sense(const std::string& tok) {
  if (tok == "<=" || tok == "<") return RowSense::less_equal;
  if (tok == ">=" || tok == ">") return RowSense::greater_equal;
  return RowSense::equal;
}

struct Expr {
  std::map<std::string, double> linear;
  std::map<std::pair<std::string, std::string>, double> quadratic;
};

// Parses tokens[pos..end) as a linear expression with an optional
// "[ ... ] / 2" quadratic bracket.
Expr parse_expr(const std::vector<std::string>& toks, std::size_t pos, std::size_t end) {
  Expr e;
  bool in_bracket = false;
  std::vector<std::pair<std::pair<std::string, std::string>, double>> bracket;
  double sign = 1.0;
  double coef = 1.0;
  bool have_coef = false;
  while (pos < end) {
    const std::string& t = toks[pos];
    if (t == "+" || t == "-") {
      sign = t == "-" ? -1.0 : 1.0;
      ++pos;
      continue;
    }
    if (t == "[") {
      in_bracket = true;
      ++pos;
      continue;
    }
    if (t == "]") {
      in_bracket = false;
      double div = 1.0;
      if (pos + 2 < end && toks[pos + 1] == "/") {
        div = parse_double(toks[pos + 2]);
        pos += 3;
      } else {
        ++pos;
      }
      for (auto& [key, c] : bracket) e.quadratic[key] += c / div;
      bracket.clear();
      sign = 1.0;
      continue;
    }
    if (is_number(t)) {
      // A leading sign may be glued to the number.
      coef = parse_double(t);
      have_coef = true;
      ++pos;
      if (pos >= end || toks[pos] == "+" || toks[pos] == "-" || toks[pos] == "]")
        throw std::runtime_error("lp: constant terms inside expressions are not supported");
      continue;
    }
    std::string var = t;
    double c = sign * (have_coef ? coef : 1.0);
    if (!var.empty() && var[0] == '-') {
      c = -c;
      var = var.substr(1);
    }
    ++pos;
    if (in_bracket) {
      std::pair<std::string, std::string> key;
      if (pos + 1 < end && toks[pos] == "^" && toks[pos + 1] == "2") {
        key = {var, var};
        pos += 2;
      } else if (pos + 1 < end && toks[pos] == "*") {
        std::string other = toks[pos + 1];
        key = var <= other ? std::make_pair(var, other) : std::make_pair(other, var);
        pos += 2;
      } else {
        throw std::runtime_error("lp: expected a quadratic term after '" + var + "'");
      }
      bracket.emplace_back(key, c);
    } else {
      e.linear[var] += c;
    }
    sign = 1.0;
    have_coef = false;
  }
  if (in_bracket) throw std::runtime_error("lp: unterminated quadratic bracket");
  return e;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

LpFileModel parse_lp(std::istream& in) {
  enum class Section { none, objective, constraints, bounds, binary, sos, end };
  LpFileModel model;
  Section sec = Section::none;
  std::vector<std::string> objective_toks;
  std::vector<std::string> pending;  // constraint tokens spanning lines
  std::string line;
  const std::string const_tag = "objective constant:";

  auto flush_constraint = [&] {
    if (pending.empty()) return;
    LpFileModel::Row row;
    std::size_t start = 0;
    if (pending[0].back() == ':') {
      row.name = pending[0].substr(0, pending[0].size() - 1);
      start = 1;
    }
    std::size_t s = start;
    while (s < pending.size() && !is_sense(pending[s])) ++s;
    if (s + 2 != pending.size()) throw std::runtime_error("lp: malformed constraint '" + row.name + "'");
    row.terms = parse_expr(pending, start, s).linear;
    row.sense = to_sense(pending[s]);
    row.rhs = parse_double(pending[s + 1]);
    model.rows.push_back(std::move(row));
    pending.clear();
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '\\') {
      const auto at = line.find(const_tag);
      if (at != std::string::npos) model.objective_constant = parse_double(split(line.substr(at + const_tag.size()))[0]);
      continue;
    }
    const std::string key = lower(line.substr(first));
    const auto toks = split(line);
    if (key.starts_with("minimize") || key.starts_with("minimum") || key.starts_with("min")) {
      if (toks.size() == 1) {
        sec = Section::objective;
        continue;
      }
    }
    if (key == "subject to" || key == "such that" || key == "st" || key == "s.t.") {
      sec = Section::constraints;
      continue;
    }
    if (key == "bounds" || key == "bound") {
      flush_constraint();
      sec = Section::bounds;
      continue;
    }
    if (key == "binary" || key == "binaries" || key == "bin") {
      flush_constraint();
      sec = Section::binary;
      continue;
    }
    if (key == "sos") {
      flush_constraint();
      sec = Section::sos;
      continue;
    }
    if (key == "end") {
      flush_constraint();
      sec = Section::end;
      continue;
    }
    switch (sec) {
      case Section::objective:
        objective_toks.insert(objective_toks.end(), toks.begin(), toks.end());
        break;
      case Section::constraints: {
        if (toks[0].back() == ':' && !pending.empty()) flush_constraint();
        pending.insert(pending.end(), toks.begin(), toks.end());
        const bool complete = pending.size() >= 2 && is_sense(pending[pending.size() - 2]);
        if (complete) flush_constraint();
        break;
      }
      case Section::bounds: {
        if (toks.size() == 2 && lower(toks[1]) == "free") {
          model.bounds[toks[0]] = {-LpProblem::inf, LpProblem::inf};
        } else if (toks.size() == 5 && is_sense(toks[1]) && is_sense(toks[3])) {
          model.bounds[toks[2]] = {parse_double(toks[0]), parse_double(toks[4])};
        } else if (toks.size() == 3 && is_sense(toks[1])) {
          auto& b = model.bounds[toks[0]];
          const double v = parse_double(toks[2]);
          if (toks[1] == "=") b = {v, v};
          else if (toks[1][0] == '<') b.upper = v;
          else b.lower = v;
        } else {
          throw std::runtime_error("lp: unsupported bound line '" + line + "'");
        }
        break;
      }
      case Section::binary:
        for (const auto& t : toks) {
          model.binaries.push_back(t);
          auto& b = model.bounds[t];
          b.lower = std::max(b.lower, 0.0);
          b.upper = std::min(b.upper, 1.0);
        }
        break;
      case Section::sos: {
        std::vector<std::string> set;
        bool after = false;
        for (const auto& t : toks) {
          if (t == "::") {
            after = true;
            continue;
          }
          if (!after) continue;
          set.push_back(t.substr(0, t.find(':')));
        }
        model.sos1_sets.push_back(std::move(set));
        break;
      }
      case Section::none:
      case Section::end:
        throw std::runtime_error("lp: content outside a section: '" + line + "'");
    }
  }
  flush_constraint();
  std::size_t start = 0;
  if (!objective_toks.empty() && objective_toks[0].back() == ':') start = 1;
  Expr obj = parse_expr(objective_toks, start, objective_toks.size());
  model.linear = std::move(obj.linear);
  model.quadratic = std::move(obj.quadratic);
  return model;
}

LpFileModel parse_lp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_lp(in);
}

namespace {

double value_of(const std::map<std::string, double>& x, const std::string& name) {
  const auto it = x.find(name);
  return it == x.end() ? 0.0 : it->second;
}

}  // namespace

double LpFileModel::objective(const std::map<std::string, double>& x) const {
  double total = objective_constant;
  for (const auto& [name, c] : linear) total += c * value_of(x, name);
  for (const auto& [key, c] : quadratic) total += c * value_of(x, key.first) * value_of(x, key.second);
  return total;
}

double LpFileModel::max_violation(const std::map<std::string, double>& x) const {
  double worst = 0.0;
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (const auto& [name, c] : row.terms) lhs += c * value_of(x, name);
    const double diff = lhs - row.rhs;
    switch (row.sense) {
      case RowSense::less_equal: worst = std::max(worst, diff); break;
      case RowSense::greater_equal: worst = std::max(worst, -diff); break;
      case RowSense::equal: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  // Variables without a bound line default to [0, inf).
  std::map<std::string, Bound> all = bounds;
  for (const auto& [name, v] : x) all.try_emplace(name, Bound{});
  for (const auto& [name, c] : linear) all.try_emplace(name, Bound{});
  for (const auto& row : rows)
    for (const auto& [name, c] : row.terms) all.try_emplace(name, Bound{});
  for (const auto& [name, b] : all) {
    const double v = value_of(x, name);
    worst = std::max({worst, b.lower - v, v - b.upper});
  }
  for (const auto& name : binaries) {
    const double v = value_of(x, name);
    worst = std::max(worst, std::abs(v - std::round(v)));
  }
  for (const auto& set : sos1_sets) {
    std::vector<double> mags;
    for (const auto& name : set) mags.push_back(std::abs(value_of(x, name)));
    std::sort(mags.rbegin(), mags.rend());
    if (mags.size() >= 2) worst = std::max(worst, mags[1]);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string report_status(const SelectionReport& rep) {
  if (rep.method == "fit") return "fixed";
  if (rep.optimal) return "optimal";
  if (rep.method == "stepwise") return "heuristic";
  return "time_limit";
}

void dump(const nlohmann::ordered_json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
        dump(it.value(), indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump(v, indent + 2, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::ordered_json& j) {
  std::string out;
  dump(j, 0, out);
  out += '\n';
  return out;
}

nlohmann::ordered_json report_to_json(const SelectionReport& rep) {
  using oj = nlohmann::ordered_json;
  auto num = [](double v) { return std::isfinite(v) ? oj(v) : oj(nullptr); };
  auto feature = [&](int j) {
    return j >= 0 && static_cast<std::size_t>(j) < rep.feature_names.size() ? rep.feature_names[static_cast<std::size_t>(j)]
                                                                             : "x" + std::to_string(j + 1);
  };
  oj j;
  j["method"] = rep.method;
  j["direction"] = to_string(rep.direction);
  j["criterion_name"] = to_string(rep.criterion);
  j["criterion_value"] = num(rep.criterion_value);
  j["objval"] = num(rep.objval);
  j["lower_bound"] = num(rep.lower_bound);
  j["selected"] = oj::array();
  for (int idx : rep.selected) {
    oj s;
    s["index"] = idx + 1;
    s["name"] = feature(idx);
    j["selected"].push_back(std::move(s));
  }
  j["coefficients"] = oj::array();
  for (std::size_t k = 0; k < rep.coefficients.size(); ++k) {
    const FitResult& fr = rep.coefficients[k];
    oj c;
    c["class"] = k + 1;
    c["intercept"] = num(fr.intercept);
    c["weights"] = oj::array();
    for (std::size_t q = 0; q < rep.selected.size() && static_cast<Eigen::Index>(q) < fr.coefficients.size(); ++q) {
      oj w;
      w["name"] = feature(rep.selected[q]);
      w["value"] = num(fr.coefficients(static_cast<Eigen::Index>(q)));
      c["weights"].push_back(std::move(w));
    }
    c["loss"] = num(fr.loss);
    c["converged"] = fr.converged;
    c["box_active"] = fr.box_active;
    j["coefficients"].push_back(std::move(c));
  }
  j["n"] = rep.n;
  j["p"] = rep.p;
  j["m"] = rep.m;
  j["nodes"] = rep.nodes;
  j["incumbent_updates"] = rep.incumbent_updates;
  j["status"] = report_status(rep);
  j["wall_time_s"] = num(rep.wall_time_s);
  j["warnings"] = rep.warnings;
  return j;
}

void write_report(const SelectionReport& rep, std::ostream& out) {
  out << canonical_dump(report_to_json(rep));
  if (!out) throw std::runtime_error("report: write failed");
}

void write_report(const SelectionReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_report(rep, out);
}

std::string summary_line(const SelectionReport& rep) {
  return rep.method + ' ' + format_number(rep.criterion_value) + ' ' + format_number(rep.objval) + ' ' +
         std::to_string(rep.selected.size()) + ' ' + format_number(rep.wall_time_s);
}

}  // namespace seqlogit
