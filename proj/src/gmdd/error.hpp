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

#ifndef GMDD_ERROR_HPP
#define GMDD_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gmdd {

// Bad input: wrong dimensions, invalid parameters, malformed data.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

// Input was well formed but the computation could not produce a result
// (rank deficiency, degenerate covariance, non-convergence).
class ComputationError : public std::runtime_error {
public:
  explicit ComputationError(const std::string &what) : std::runtime_error(what) {}
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace gmdd

#endif
