#pragma once

// Dataset ingestion, preprocessing and the ordinal label encodings.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace seqlogit {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Untyped table as read from disk. Missing cells are kept as empty
/// strings, "?" or "NA"; see is_missing().
struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;  // row-major, n x c
  std::size_t label_column = 0;

  std::size_t rows() const { return cells.size(); }
  std::size_t cols() const { return columns.size(); }
};

bool is_missing(const std::string& cell);

enum class Direction { forward, backward };

std::string to_string(Direction d);
Direction parse_direction(const std::string& s);

/// Standardized features and contiguous ordinal labels in {1, ..., m+1}.
struct Dataset {
  Eigen::MatrixXd X;  // n x p
  Eigen::VectorXi y;  // values in 1..m+1
  int m = 0;
  std::vector<std::string> feature_names;
  std::string label_name;
  std::vector<std::string> warnings;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// delta(i,k) = 1 iff y_i = k; psi(i,k) = -1 if k < y_i, +1 if k = y_i, else 0.
/// Columns are k = 1..m (stored 0-based).
struct OrdinalEncoding {
  Eigen::MatrixXi delta;
  Eigen::MatrixXi psi;
  Direction direction = Direction::forward;

  int m() const { return static_cast<int>(psi.cols()); }
};

struct PreprocessOptions {
  double missing_column_threshold = 0.10;
  bool standardize = true;
  bool dummy_encode = true;
  std::vector<std::string> drop_columns;
  /// Explicit order for non-numeric labels (lowest class first).
  std::vector<std::string> label_order;
};

struct CsvOptions {
  /// 0 = auto-detect among ',', ';' and '\t' from the header line.
  char delimiter = 0;
};

RawTable read_csv(std::istream& in, const std::string& label, const CsvOptions& opts = {});
RawTable load_csv(const std::string& path, const std::string& label, const CsvOptions& opts = {});

Dataset preprocess(const RawTable& table, const PreprocessOptions& opts = {});

OrdinalEncoding encode_labels(const Dataset& data, Direction direction);
OrdinalEncoding encode_labels(const Eigen::VectorXi& y, int m, Direction direction);

/// Canonical CSV: feature columns then the label, floats at 17 significant digits.
void write_dataset_csv(const Dataset& data, std::ostream& out);
void write_dataset_csv(const Dataset& data, const std::string& path);

/// Index of a feature by name, if present.
std::optional<int> find_feature(const Dataset& data, const std::string& name);

}  // namespace seqlogit
