/*
 * Copyright (C) 2026 The gmdd-test Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GMDD_DATASET_HPP
#define GMDD_DATASET_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gmdd/types.hpp"

namespace gmdd {

class Dataset {
public:
  Dataset() = default;
  Dataset(std::vector<std::string> names, Matrix values, std::string provenance = {});

  const std::vector<std::string> &names() const { return names_; }
  const Matrix &values() const { return values_; }
  const std::string &provenance() const { return provenance_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  bool has(std::string_view name) const;
  Eigen::Index index(std::string_view name) const;
  Vector column(std::string_view name) const;
  Matrix columns(const std::vector<std::string> &names) const;

  /// Rows removed during ingestion and a note for each (row and column).
  std::size_t dropped_rows = 0;
  std::vector<std::string> drop_notes;

private:
  std::vector<std::string> names_;
  Matrix values_;
  std::string provenance_;
};

/// Reads a headered CSV. Only `required` columns are kept (all columns when
/// empty). Rows with an empty or non-numeric required cell are dropped.
Dataset load_csv(const std::string &path, const std::vector<std::string> &required = {});
Dataset parse_csv(std::istream &in, const std::vector<std::string> &required,
                  const std::string &provenance);

/// Splits "a,b,c" into names, trimming blanks.
std::vector<std::string> split_names(std::string_view text);

/// Parses one CSV line, honoring double quotes.
std::vector<std::string> split_csv_line(std::string_view line);

bool parse_double(std::string_view text, double &out);

} // namespace gmdd

#endif
