// Copyright 2026 The cookplan Authors
//
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

#ifndef COOKPLAN_ERRORS_HPP_
#define COOKPLAN_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace cookplan {

/// Raised by every text parser in the library. `position` is a byte offset
/// into the parsed input and `expected` names what the parser was looking for.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::string expected)
      : std::runtime_error("parse error at " + std::to_string(position) +
                           ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

}  // namespace cookplan

#endif  // COOKPLAN_ERRORS_HPP_
