// Copyright 2026 The shapfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef SHAPFAIR_CSV_HPP
#define SHAPFAIR_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace shapfair::csv {

using Record = std::vector<std::string>;

/// Parses RFC-4180 text: comma separated, double-quoted fields may contain
/// commas, CRLF and doubled quotes. Blank lines are skipped.
std::vector<Record> parse(std::string_view text);

std::vector<Record> read_file(const std::string& path);

/// Quotes a field only when it contains a separator, quote or newline.
std::string escape(std::string_view field);

void write_record(std::ostream& out, const Record& record);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double v);

}  // namespace shapfair::csv

#endif  // SHAPFAIR_CSV_HPP
