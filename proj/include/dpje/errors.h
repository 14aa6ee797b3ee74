// Copyright 2026 The DPJE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPJE_ERRORS_H_
#define DPJE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpje {

// Base class for every error raised by the library. `kind()` is the stable
// name surfaced by the CLI ("ParseError: ...").
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  std::string_view kind() const { return kind_; }

 private:
  std::string_view kind_;
};

#define DPJE_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

DPJE_DEFINE_ERROR(ParseError);
DPJE_DEFINE_ERROR(RankError);
DPJE_DEFINE_ERROR(DimensionError);
DPJE_DEFINE_ERROR(IndexError);
DPJE_DEFINE_ERROR(ClosenessError);
DPJE_DEFINE_ERROR(SingularError);
DPJE_DEFINE_ERROR(PreconditionError);
DPJE_DEFINE_ERROR(DomainError);
DPJE_DEFINE_ERROR(QuadratureError);
DPJE_DEFINE_ERROR(BudgetError);
DPJE_DEFINE_ERROR(InfeasibleError);
DPJE_DEFINE_ERROR(TraceError);
DPJE_DEFINE_ERROR(ContainmentViolation);

#undef DPJE_DEFINE_ERROR

}  // namespace dpje

#endif  // DPJE_ERRORS_H_
