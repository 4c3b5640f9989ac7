// Copyright 2026 The shapfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef SHAPFAIR_DATA_HPP
#define SHAPFAIR_DATA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "shapfair/matrix.hpp"

namespace shapfair {

/// Integer dictionary encoding of categorical columns. Codes are assigned
/// in first-appearance order: values[column][code] is the original string.
struct Encoding {
  std::map<std::string, std::vector<std::string>> values;

  bool is_categorical(const std::string& column) const {
    return values.contains(column);
  }
  /// Original string for a code, or the number formatted for display.
  std::string decode(const std::string& column, double code) const;
  /// Code for a category string; throws SchemaError when absent.
  double encode(const std::string& column, const std::string& value) const;

  nlohmann::json to_json() const;
  static Encoding from_json(const nlohmann::json& j);
};

/// Tabular audit data: features X, binary outcome Y, optional black-box
/// score R. Immutable after construction by convention; operations return
/// new datasets.
struct Dataset {
  Matrix features;
  std::vector<std::string> column_names;
  std::vector<int> label;
  std::optional<std::vector<double>> score;
  Encoding encoding;

  std::size_t n_rows() const noexcept { return features.rows(); }
  std::size_t n_features() const noexcept { return features.cols(); }

  /// Index of a feature column; throws SchemaError naming the column.
  std::size_t column_index(const std::string& name) const;

  /// Rows in the given order (labels/score carried along).
  Dataset subset(std::span<const std::size_t> rows) const;

  /// Throws ValidationError if any invariant is broken.
  void validate() const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.features == b.features && a.column_names == b.column_names &&
           a.label == b.label && a.score == b.score &&
           a.encoding.values == b.encoding.values;
  }
};

/// The protected attribute A and its encoded group values.
struct ProtectedSpec {
  std::string column;
  std::vector<double> groups;
  int favorable_outcome = 1;

  /// Checks the column exists, there are >= 2 groups and every row's value
  /// is one of them.
  void validate(const Dataset& d) const;
};

/// Column roles for load_csv.
struct Schema {
  std::string label_column;
  std::optional<std::string> score_column;
  /// When non-empty, only these columns become features (in file order).
  std::vector<std::string> feature_columns;
  /// Columns forced to dictionary encoding even if they look numeric.
  std::vector<std::string> categorical_columns;
};

/// Reads an RFC-4180 CSV with a header row. A column is dictionary encoded
/// when listed in schema.categorical_columns or when its first data cell
/// is not a number; any later non-numeric cell in a numeric column is a
/// ParseError carrying the row index. Empty cells are rejected.
Dataset load_csv(const std::string& path, const Schema& schema);

/// Same as load_csv over in-memory text.
Dataset parse_csv(const std::string& text, const Schema& schema);

/// Writes features (categories decoded back to strings), then the label
/// column and the score column if present.
void write_csv(const std::string& path, const Dataset& d,
               const std::string& label_column = "label",
               const std::string& score_column = "score");
std::string to_csv(const Dataset& d, const std::string& label_column = "label",
                   const std::string& score_column = "score");

/// Resolves group names (category strings or numeric literals) for a
/// protected column to encoded values. Empty names means "every distinct
/// value, ascending".
ProtectedSpec make_protected_spec(const Dataset& d, const std::string& column,
                                  const std::vector<std::string>& group_names,
                                  int favorable_outcome);

/// Copy of d whose protected column holds a uniformly random permutation of
/// its original values. Group counts are preserved exactly.
Dataset permute_protected(const Dataset& d, const ProtectedSpec& spec,
                          std::uint64_t seed);

/// Seeded disjoint partition into (train, test). train receives
/// round(train_fraction * n) rows; both sides must be non-empty.
std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction,
                                  std::uint64_t seed);

/// Row indices of d behind split(); exposed for reporting.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n_rows, double train_fraction, std::uint64_t seed);

}  // namespace shapfair

#endif  // SHAPFAIR_DATA_HPP
