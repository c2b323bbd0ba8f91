// Copyright 2026-present the wackymeter project
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
#pragma once

#include <string>
#include <string_view>

namespace wackymeter {

// Shortest decimal that parses back to exactly `value`. Every file this
// library writes formats reals through here.
std::string format_real(double value);

// RFC 4180 field quoting; fields without separators pass through unchanged.
std::string csv_field(std::string_view text);

// JSON string literal, including the surrounding quotes.
std::string json_string(std::string_view text);

}  // namespace wackymeter
