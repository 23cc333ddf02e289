// Copyright 2026 The aesguard Authors
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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace aesguard::csv {

// Quotes the field when it contains a comma, quote, CR or LF (RFC 4180).
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Parses RFC 4180 text: quoted fields may contain commas, doubled quotes and
// line breaks. Accepts LF or CRLF record separators. Throws Error(kIo) on an
// unterminated quote.
std::vector<std::vector<std::string>> parse(std::istream& in);

// Fixed-point formatting, locale independent.
std::string fixed(double value, int decimals);

}  // namespace aesguard::csv
