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

#include "gmdd/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <unordered_map>

#include "gmdd/error.hpp"

namespace gmdd {

namespace {

constexpr std::size_t kMaxDropNotes = 20;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

} // namespace

Dataset::Dataset(std::vector<std::string> names, Matrix values, std::string provenance)
    : names_(std::move(names)), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (static_cast<Eigen::Index>(names_.size()) != values_.cols())
    throw ValidationError("column names do not match the number of columns");
  std::set<std::string> seen;
  for (const auto &n : names_) {
    if (n.empty())
      throw ValidationError("empty column name");
    if (!seen.insert(n).second)
      throw ValidationError("duplicate column name '" + n + "'");
  }
}

bool Dataset::has(std::string_view name) const {
  for (const auto &n : names_) {
    if (n == name)
      return true;
  }
  return false;
}

Eigen::Index Dataset::index(std::string_view name) const {
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (names_[c] == name)
      return static_cast<Eigen::Index>(c);
  }
  throw ValidationError("missing column '" + std::string(name) + "'");
}

Vector Dataset::column(std::string_view name) const { return values_.col(index(name)); }

Matrix Dataset::columns(const std::vector<std::string> &names) const {
  Matrix m(values_.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t c = 0; c < names.size(); ++c)
    m.col(static_cast<Eigen::Index>(c)) = column(names[c]);
  return m;
}

std::vector<std::string> split_names(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const auto item = trim(text.substr(start, end - start));
    if (!item.empty())
      out.emplace_back(item);
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted)
    throw ValidationError("unterminated quote in CSV line");
  out.push_back(std::move(cur));
  return out;
}

bool parse_double(std::string_view text, double &out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  if (text.empty())
    return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(out);
}

Dataset parse_csv(std::istream &in, const std::vector<std::string> &required,
                  const std::string &provenance) {
  std::string line;
  std::size_t line_no = 0;
  // Header: first nonblank line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty())
    throw ValidationError("CSV input '" + provenance + "' is empty");
  for (auto &h : header)
    h = std::string(trim(h));

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!position.emplace(header[c], c).second)
      throw ValidationError("duplicate column '" + header[c] + "' in CSV header");
  }
  const std::vector<std::string> keep = required.empty() ? header : required;
  std::vector<std::size_t> src;
  for (const auto &name : keep) {
    const auto it = position.find(name);
    if (it == position.end())
      throw ValidationError("missing required column '" + name + "' in '" + provenance + "'");
    src.push_back(it->second);
  }

  std::vector<double> flat;
  std::size_t kept = 0, dropped = 0;
  std::vector<std::string> notes;
  std::vector<double> row(keep.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ValidationError("line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " fields, header has " +
                            std::to_string(header.size()));
    bool ok = true;
    for (std::size_t c = 0; c < keep.size(); ++c) {
      if (!parse_double(cells[src[c]], row[c])) {
        ok = false;
        if (notes.size() < kMaxDropNotes)
          notes.push_back("line " + std::to_string(line_no) + ", column '" + keep[c] +
                          "': unparseable value '" + cells[src[c]] + "'");
        break;
      }
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    flat.insert(flat.end(), row.begin(), row.end());
    ++kept;
  }

  Matrix values(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < kept; ++r)
    for (std::size_t c = 0; c < keep.size(); ++c)
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          flat[r * keep.size() + c];

  Dataset ds(keep, std::move(values), provenance);
  ds.dropped_rows = dropped;
  ds.drop_notes = std::move(notes);
  if (ds.rows() < 2)
    throw ValidationError("CSV input '" + provenance + "' has fewer than 2 usable rows");
  return ds;
}

Dataset load_csv(const std::string &path, const std::vector<std::string> &required) {
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open '" + path + "'");
  return parse_csv(in, required, path);
}

} // namespace gmdd
