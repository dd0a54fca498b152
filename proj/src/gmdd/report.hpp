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

#ifndef GMDD_REPORT_HPP
#define GMDD_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmdd/bootstrap.hpp"
#include "gmdd/mi_test.hpp"
#include "gmdd/simulation.hpp"
#include "gmdd/spec_test.hpp"

namespace gmdd {

using Json = nlohmann::ordered_json;

/// 17 significant digits, enough to round-trip a double.
std::string format_real(double x);

Json to_json(const Vector &v);
Json to_json(const Matrix &m); // array of rows
Json to_json(const MiTestResult &r);
Json to_json(const SpecTestResult &r);

inline constexpr const char *kSimCsvHeader = "dgp,test,n,gamma,level,rate,mc_se";
inline constexpr const char *kTimingCsvHeader =
    "dgp,test,n,reps,mean_seconds,sd_seconds,median_relative,iqr_relative";

void write_sim_csv(const std::vector<SimRow> &rows, std::ostream &out);
std::vector<SimRow> read_sim_csv(std::istream &in);
void write_timing_csv(const std::vector<TimingRow> &rows, std::ostream &out);
Json sim_rows_json(const std::vector<SimRow> &rows);
Json timing_rows_json(const std::vector<TimingRow> &rows);

/// Flat "field,value" CSV of a JSON object; arrays expand to field[i] or
/// field[i][j].
std::string json_to_field_csv(const Json &obj);

} // namespace gmdd

#endif
