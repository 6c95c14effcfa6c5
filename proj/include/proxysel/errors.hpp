// Copyright 2026 The ProxySel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROXYSEL_ERRORS_HPP
#define PROXYSEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace proxysel {

/// Invalid argument or out-of-range input (bad level count, bad index, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Rank-deficient or numerically singular user group.
class SingularityError : public std::runtime_error {
 public:
  explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed channel file or report file.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace proxysel

#endif  // PROXYSEL_ERRORS_HPP
