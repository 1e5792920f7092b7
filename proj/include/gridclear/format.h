// Copyright 2026 The gridclear Authors
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

#ifndef GRIDCLEAR_FORMAT_H_
#define GRIDCLEAR_FORMAT_H_

#include <optional>
#include <string>
#include <string_view>

namespace gridclear {

// Shortest decimal text that parses back to the same double. Infinities are
// written as "inf" / "-inf", NaN as "nan". Negative zero prints as "0".
std::string format_number(double value);

// Accepts everything format_number produces plus ordinary decimal and
// exponent notation. Returns nullopt unless the whole token is consumed.
std::optional<double> parse_number(std::string_view token);

}  // namespace gridclear

#endif  // GRIDCLEAR_FORMAT_H_
