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
#include "shapfair/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "shapfair/csv.hpp"
#include "shapfair/error.hpp"
#include "shapfair/random.hpp"

namespace shapfair {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::string Encoding::decode(const std::string& column, double code) const {
  auto it = values.find(column);
  if (it != values.end()) {
    const auto idx = static_cast<std::size_t>(code);
    if (code >= 0 && static_cast<double>(idx) == code && idx < it->second.size()) {
      return it->second[idx];
    }
  }
  return csv::format_double(code);
}

double Encoding::encode(const std::string& column, const std::string& value) const {
  auto it = values.find(column);
  if (it == values.end()) {
    throw SchemaError("column '" + column + "' is not categorical");
  }
  auto pos = std::find(it->second.begin(), it->second.end(), value);
  if (pos == it->second.end()) {
    throw SchemaError("value '" + value + "' not present in column '" + column + "'");
  }
  return static_cast<double>(pos - it->second.begin());
}

nlohmann::json Encoding::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [col, vals] : values) j[col] = vals;
  return j;
}

Encoding Encoding::from_json(const nlohmann::json& j) {
  Encoding e;
  for (const auto& [col, vals] : j.items()) {
    e.values[col] = vals.get<std::vector<std::string>>();
  }
  return e;
}

std::size_t Dataset::column_index(const std::string& name) const {
  auto it = std::find(column_names.begin(), column_names.end(), name);
  if (it == column_names.end()) {
    throw SchemaError("missing column '" + name + "'");
  }
  return static_cast<std::size_t>(it - column_names.begin());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features = features.select_rows(rows);
  out.column_names = column_names;
  out.encoding = encoding;
  out.label.reserve(rows.size());
  for (auto r : rows) out.label.push_back(label[r]);
  if (score) {
    std::vector<double> s;
    s.reserve(rows.size());
    for (auto r : rows) s.push_back((*score)[r]);
    out.score = std::move(s);
  }
  return out;
}

void Dataset::validate() const {
  if (n_rows() < 1) throw ValidationError("dataset has no rows");
  if (column_names.size() != n_features()) {
    throw ValidationError("column name count does not match feature count");
  }
  if (label.size() != n_rows()) throw ValidationError("label length mismatch");
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] != 0 && label[i] != 1) {
      throw ValidationError("label at row " + std::to_string(i) + " is not 0/1");
    }
  }
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
  }
  if (score) {
    if (score->size() != n_rows()) throw ValidationError("score length mismatch");
    for (std::size_t i = 0; i < score->size(); ++i) {
      const double s = (*score)[i];
      if (!(s >= 0.0 && s <= 1.0)) {
        throw ValidationError("score at row " + std::to_string(i) +
                              " outside [0,1]");
      }
    }
  }
}

void ProtectedSpec::validate(const Dataset& d) const {
  const std::size_t col = d.column_index(column);
  if (groups.size() < 2) {
    throw SchemaError("protected column '" + column + "' needs at least two groups");
  }
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    const double v = d.features(r, col);
    if (std::find(groups.begin(), groups.end(), v) == groups.end()) {
      throw ValidationError("row " + std::to_string(r) + " has protected value '" +
                            d.encoding.decode(column, v) +
                            "' outside the declared groups");
    }
  }
  if (favorable_outcome != 0 && favorable_outcome != 1) {
    throw SchemaError("favorable outcome must be 0 or 1");
  }
}

Dataset parse_csv(const std::string& text, const Schema& schema) {
  const auto records = csv::parse(text);
  if (records.empty()) throw SchemaError("CSV has no header row");
  const auto& header = records.front();

  auto require = [&](const std::string& name) {
    if (!contains(header, name)) throw SchemaError("missing column '" + name + "'");
  };
  require(schema.label_column);
  if (schema.score_column) require(*schema.score_column);
  for (const auto& c : schema.feature_columns) require(c);
  for (const auto& c : schema.categorical_columns) require(c);

  const std::size_t n_cols = header.size();
  std::size_t label_col = 0;
  std::optional<std::size_t> score_col;
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (header[c] == schema.label_column) {
      label_col = c;
    } else if (schema.score_column && header[c] == *schema.score_column) {
      score_col = c;
    } else if (schema.feature_columns.empty() ||
               contains(schema.feature_columns, header[c])) {
      feature_cols.push_back(c);
    }
  }

  Dataset d;
  for (auto c : feature_cols) d.column_names.push_back(header[c]);

  const std::size_t n_rows = records.size() - 1;
  if (n_rows == 0) throw ValidationError("CSV has a header but no data rows");
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (records[r + 1].size() != n_cols) {
      throw ParseError("row " + std::to_string(r) + " has " +
                           std::to_string(records[r + 1].size()) +
                           " fields, expected " + std::to_string(n_cols),
                       r);
    }
  }

  std::vector<bool> categorical(feature_cols.size(), false);
  for (std::size_t f = 0; f < feature_cols.size(); ++f) {
    const auto& name = header[feature_cols[f]];
    const auto& first = records[1][feature_cols[f]];
    categorical[f] = contains(schema.categorical_columns, name) ||
                     (!trim(first).empty() && !parse_number(first));
    if (categorical[f]) d.encoding.values[name];
  }

  std::vector<double> values;
  values.reserve(n_rows * feature_cols.size());
  d.label.reserve(n_rows);
  std::vector<double> scores;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& rec = records[r + 1];
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const auto& name = header[feature_cols[f]];
      const std::string& cell = rec[feature_cols[f]];
      if (trim(cell).empty()) {
        throw ParseError("missing value in column '" + name + "' at row " +
                             std::to_string(r),
                         r);
      }
      if (categorical[f]) {
        auto& dict = d.encoding.values[name];
        auto it = std::find(dict.begin(), dict.end(), cell);
        if (it == dict.end()) {
          dict.push_back(cell);
          values.push_back(static_cast<double>(dict.size() - 1));
        } else {
          values.push_back(static_cast<double>(it - dict.begin()));
        }
      } else {
        auto v = parse_number(cell);
        if (!v) {
          throw ParseError("non-numeric value '" + cell + "' in column '" + name +
                               "' at row " + std::to_string(r),
                           r);
        }
        values.push_back(*v);
      }
    }
    auto y = parse_number(rec[label_col]);
    if (!y) {
      throw ParseError("non-numeric label '" + rec[label_col] + "' at row " +
                           std::to_string(r),
                       r);
    }
    if (*y != 0.0 && *y != 1.0) {
      throw ValidationError("label at row " + std::to_string(r) + " is " +
                            rec[label_col] + ", expected 0 or 1");
    }
    d.label.push_back(static_cast<int>(*y));
    if (score_col) {
      auto s = parse_number(rec[*score_col]);
      if (!s) {
        throw ParseError("non-numeric score '" + rec[*score_col] + "' at row " +
                             std::to_string(r),
                         r);
      }
      if (*s < 0.0 || *s > 1.0) {
        throw ValidationError("score at row " + std::to_string(r) +
                              " outside [0,1]");
      }
      scores.push_back(*s);
    }
  }
  d.features = Matrix(n_rows, feature_cols.size(), std::move(values));
  if (score_col) d.score = std::move(scores);
  d.validate();
  return d;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), schema);
}

std::string to_csv(const Dataset& d, const std::string& label_column,
                   const std::string& score_column) {
  std::ostringstream out;
  csv::Record header = d.column_names;
  header.push_back(label_column);
  if (d.score) header.push_back(score_column);
  csv::write_record(out, header);
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    csv::Record rec;
    rec.reserve(header.size());
    for (std::size_t c = 0; c < d.n_features(); ++c) {
      const auto& name = d.column_names[c];
      rec.push_back(d.encoding.is_categorical(name)
                        ? d.encoding.decode(name, d.features(r, c))
                        : csv::format_double(d.features(r, c)));
    }
    rec.push_back(std::to_string(d.label[r]));
    if (d.score) rec.push_back(csv::format_double((*d.score)[r]));
    csv::write_record(out, rec);
  }
  return out.str();
}

void write_csv(const std::string& path, const Dataset& d,
               const std::string& label_column, const std::string& score_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write '" + path + "'");
  out << to_csv(d, label_column, score_column);
}

ProtectedSpec make_protected_spec(const Dataset& d, const std::string& column,
                                  const std::vector<std::string>& group_names,
                                  int favorable_outcome) {
  ProtectedSpec spec;
  spec.column = column;
  spec.favorable_outcome = favorable_outcome;
  const std::size_t col = d.column_index(column);
  if (group_names.empty()) {
    std::set<double> distinct;
    for (std::size_t r = 0; r < d.n_rows(); ++r) distinct.insert(d.features(r, col));
    spec.groups.assign(distinct.begin(), distinct.end());
  } else {
    for (const auto& name : group_names) {
      if (d.encoding.is_categorical(column)) {
        spec.groups.push_back(d.encoding.encode(column, name));
      } else {
        auto v = parse_number(name);
        if (!v) {
          throw SchemaError("group '" + name + "' is not numeric for column '" +
                            column + "'");
        }
        spec.groups.push_back(*v);
      }
    }
  }
  spec.validate(d);
  return spec;
}

Dataset permute_protected(const Dataset& d, const ProtectedSpec& spec,
                          std::uint64_t seed) {
  const std::size_t col = d.column_index(spec.column);
  std::vector<double> a = d.features.column(col);
  auto rng = make_rng(seed);
  shuffle(std::span<double>(a), rng);
  Dataset out = d;
  for (std::size_t r = 0; r < out.n_rows(); ++r) out.features(r, col) = a[r];
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n_rows, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ValidationError("train fraction must lie in (0,1)");
  }
  const std::size_t n_train = round_count(train_fraction * static_cast<double>(n_rows));
  if (n_train < 1 || n_train >= n_rows) {
    throw ValidationError("train fraction " + csv::format_double(train_fraction) +
                          " leaves an empty side for " + std::to_string(n_rows) +
                          " rows");
  }
  auto rng = make_rng(seed);
  auto order = permutation(n_rows, rng);
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split(const Dataset& d, double train_fraction,
                                  std::uint64_t seed) {
  auto [train, test] = split_indices(d.n_rows(), train_fraction, seed);
  return {d.subset(train), d.subset(test)};
}

}  // namespace shapfair
