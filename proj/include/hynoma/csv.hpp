// SPDX-License-Identifier: Apache-2.0
//
// hynoma - downlink hybrid NOMA power allocation library and simulator
// Copyright (C) 2026 The hynoma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HYNOMA_CSV_HPP
#define HYNOMA_CSV_HPP

#include <ostream>
#include <string>
#include <vector>

namespace hynoma
{

/// Six significant digits; +infinity is written as the literal `inf`. NaN and -inf throw
/// std::domain_error so a broken value never reaches a results file.
std::string format_number(double value);

class CsvTable
{
  public:
    explicit CsvTable(std::vector<std::string> header);

    const std::vector<std::string> &header() const { return header_; }
    const std::vector<std::vector<std::string>> &rows() const { return rows_; }

    /// Throws std::invalid_argument when the field count differs from the header.
    void add_row(std::vector<std::string> fields);

    /// LF line endings, header first, no trailing delimiter.
    void write(std::ostream &out) const;
    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes to `path`, or to stdout when `path` is empty or "-".
void write_csv(const CsvTable &table, const std::string &path);

} // namespace hynoma

#endif
