#include "seqlogit/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace seqlogit {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

char detect_delimiter(const std::string& header) {
  const char candidates[] = {',', ';', '\t'};
  char best = ',';
  std::size_t best_count = 0;
  for (char c : candidates) {
    std::size_t count = 0;
    bool quoted = false;
    for (char ch : header) {
      if (ch == '"') quoted = !quoted;
      else if (ch == c && !quoted) ++count;
    }
    if (count > best_count) {
      best = c;
      best_count = count;
    }
  }
  return best;
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  for (auto& cell : out) {
    const auto first = cell.find_first_not_of(' ');
    const auto last = cell.find_last_not_of(' ');
    cell = first == std::string::npos ? std::string{} : cell.substr(first, last - first + 1);
  }
  return out;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?" || cell == "NA"; }

std::string to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

Direction parse_direction(const std::string& s) {
  if (s == "forward") return Direction::forward;
  if (s == "backward") return Direction::backward;
  throw std::invalid_argument("unknown direction '" + s + "'");
}

RawTable read_csv(std::istream& in, const std::string& label, const CsvOptions& opts) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: missing header row");
  line = strip_cr(line);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const char delim = opts.delimiter != 0 ? opts.delimiter : detect_delimiter(line);

  RawTable table;
  table.columns = split_line(line, delim);
  const auto it = std::find(table.columns.begin(), table.columns.end(), label);
  if (it == table.columns.end()) throw DataError("csv: label column '" + label + "' not found in header");
  table.label_column = static_cast<std::size_t>(it - table.columns.begin());

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto cells = split_line(line, delim);
    if (cells.size() != table.columns.size()) {
      throw DataError("csv: ragged row " + std::to_string(lineno) + ": expected " +
                      std::to_string(table.columns.size()) + " cells, found " +
                      std::to_string(cells.size()));
    }
    table.cells.push_back(std::move(cells));
  }
  return table;
}

RawTable load_csv(const std::string& path, const std::string& label, const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open '" + path + "'");
  return read_csv(in, label, opts);
}

Dataset preprocess(const RawTable& table, const PreprocessOptions& opts) {
  if (opts.missing_column_threshold < 0.0 || opts.missing_column_threshold > 1.0)
    throw std::invalid_argument("missing column threshold must lie in [0, 1]");
  if (table.label_column >= table.cols()) throw DataError("label column index out of range");

  Dataset out;
  out.label_name = table.columns[table.label_column];
  const std::size_t n_raw = table.rows();

  for (const auto& name : opts.drop_columns) {
    if (std::find(table.columns.begin(), table.columns.end(), name) == table.columns.end())
      out.warnings.push_back("drop column '" + name + "' not present");
  }

  // Columns first, then rows.
  std::vector<std::size_t> kept;
  for (std::size_t c = 0; c < table.cols(); ++c) {
    if (c == table.label_column) continue;
    const auto& name = table.columns[c];
    if (std::find(opts.drop_columns.begin(), opts.drop_columns.end(), name) != opts.drop_columns.end())
      continue;
    std::size_t missing = 0;
    for (const auto& row : table.cells) missing += is_missing(row[c]) ? 1 : 0;
    const double fraction = n_raw == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(n_raw);
    if (fraction > opts.missing_column_threshold) {
      out.warnings.push_back("column '" + name + "' dropped: " + format_double(100.0 * fraction) +
                             "% missing");
      continue;
    }
    kept.push_back(c);
  }

  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < n_raw; ++r) {
    const auto& row = table.cells[r];
    bool complete = !is_missing(row[table.label_column]);
    for (std::size_t c : kept) complete = complete && !is_missing(row[c]);
    if (complete) rows.push_back(r);
  }
  if (rows.empty()) throw DataError("preprocess: all rows dropped");
  if (rows.size() < n_raw)
    out.warnings.push_back(std::to_string(n_raw - rows.size()) + " rows with missing values dropped");
  const auto n = static_cast<Eigen::Index>(rows.size());

  std::vector<Eigen::VectorXd> columns;
  for (std::size_t c : kept) {
    const auto& name = table.columns[c];
    Eigen::VectorXd values(n);
    bool numeric = true;
    for (Eigen::Index i = 0; i < n && numeric; ++i) {
      const auto v = parse_double(table.cells[rows[static_cast<std::size_t>(i)]][c]);
      if (v) values(i) = *v;
      else numeric = false;
    }
    if (numeric) {
      if (values.maxCoeff() == values.minCoeff()) {
        out.warnings.push_back("constant column '" + name + "' removed");
        continue;
      }
      if (opts.standardize) {
        const double mean = values.mean();
        values.array() -= mean;
        const double sd = std::sqrt(values.squaredNorm() / static_cast<double>(n));
        values /= sd;
      }
      columns.push_back(std::move(values));
      out.feature_names.push_back(name);
      continue;
    }
    if (!opts.dummy_encode) {
      out.warnings.push_back("categorical column '" + name + "' dropped (dummy encoding disabled)");
      continue;
    }
    std::vector<std::string> levels;
    for (std::size_t r : rows) levels.push_back(table.cells[r][c]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (levels.size() < 2) {
      out.warnings.push_back("constant column '" + name + "' removed");
      continue;
    }
    // first level in lexicographic order is the reference
    for (std::size_t l = 1; l < levels.size(); ++l) {
      Eigen::VectorXd dummy(n);
      for (Eigen::Index i = 0; i < n; ++i)
        dummy(i) = table.cells[rows[static_cast<std::size_t>(i)]][c] == levels[l] ? 1.0 : 0.0;
      columns.push_back(std::move(dummy));
      out.feature_names.push_back(name + "=" + levels[l]);
    }
  }

  out.X.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) out.X.col(static_cast<Eigen::Index>(j)) = columns[j];

  // Labels: numeric order when every label parses, else explicit or lexicographic order.
  std::vector<std::string> raw_labels;
  for (std::size_t r : rows) raw_labels.push_back(table.cells[r][table.label_column]);
  out.y.resize(n);
  bool numeric_labels = true;
  std::vector<double> numeric_values;
  for (const auto& s : raw_labels) {
    const auto v = parse_double(s);
    if (!v) {
      numeric_labels = false;
      break;
    }
    numeric_values.push_back(*v);
  }
  if (numeric_labels) {
    std::vector<double> distinct = numeric_values;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto pos = std::lower_bound(distinct.begin(), distinct.end(), numeric_values[static_cast<std::size_t>(i)]);
      out.y(i) = static_cast<int>(pos - distinct.begin()) + 1;
    }
    out.m = static_cast<int>(distinct.size()) - 1;
  } else {
    std::vector<std::string> order = opts.label_order;
    if (order.empty()) {
      order = raw_labels;
      std::sort(order.begin(), order.end());
      order.erase(std::unique(order.begin(), order.end()), order.end());
      out.warnings.push_back("non-numeric labels ordered lexicographically");
    }
    std::map<std::string, int> rank;
    for (const auto& s : raw_labels) {
      const auto pos = std::find(order.begin(), order.end(), s);
      if (pos == order.end()) throw DataError("label '" + s + "' missing from label order");
      rank.emplace(s, 0);
    }
    // remap only the levels actually present, keeping the given order
    int next = 1;
    for (const auto& s : order)
      if (rank.count(s)) rank[s] = next++;
    for (Eigen::Index i = 0; i < n; ++i) out.y(i) = rank[raw_labels[static_cast<std::size_t>(i)]];
    out.m = next - 2;
  }
  if (out.m < 1) throw DataError("label column '" + out.label_name + "' has a single distinct value");
  return out;
}

OrdinalEncoding encode_labels(const Eigen::VectorXi& y, int m, Direction direction) {
  OrdinalEncoding enc;
  enc.direction = direction;
  const Eigen::Index n = y.size();
  enc.delta = Eigen::MatrixXi::Zero(n, m);
  enc.psi = Eigen::MatrixXi::Zero(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = direction == Direction::forward ? y(i) : m + 2 - y(i);
    for (int k = 1; k <= m; ++k) {
      if (k < label) enc.psi(i, k - 1) = -1;
      else if (k == label) {
        enc.psi(i, k - 1) = 1;
        enc.delta(i, k - 1) = 1;
      }
    }
  }
  return enc;
}

OrdinalEncoding encode_labels(const Dataset& data, Direction direction) {
  return encode_labels(data.y, data.m, direction);
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  for (const auto& name : data.feature_names) out << name << ',';
  out << (data.label_name.empty() ? "y" : data.label_name) << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    for (Eigen::Index j = 0; j < data.p(); ++j) out << format_double(data.X(i, j)) << ',';
    out << data.y(i) << '\n';
  }
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_dataset_csv(data, out);
}

std::optional<int> find_feature(const Dataset& data, const std::string& name) {
  const auto it = std::find(data.feature_names.begin(), data.feature_names.end(), name);
  if (it == data.feature_names.end()) return std::nullopt;
  return static_cast<int>(it - data.feature_names.begin());
}

}  // namespace seqlogit
