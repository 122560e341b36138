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

#include "hynoma/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace hynoma
{

std::string format_number(double value)
{
    if (std::isnan(value) || value == -INFINITY)
        throw std::domain_error("refusing to write a non-finite value to CSV");
    if (value == INFINITY)
        return "inf";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return buffer;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header))
{
    if (header_.empty())
        throw std::invalid_argument("CSV header must not be empty");
}

void CsvTable::add_row(std::vector<std::string> fields)
{
    if (fields.size() != header_.size())
        throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                                    std::to_string(header_.size()));
    rows_.push_back(std::move(fields));
}

namespace
{

void write_line(std::ostream &out, const std::vector<std::string> &fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i != 0)
            out << ',';
        out << fields[i];
    }
    out << '\n';
}

} // namespace

void CsvTable::write(std::ostream &out) const
{
    write_line(out, header_);
    for (const auto &row : rows_)
        write_line(out, row);
}

std::string CsvTable::str() const
{
    std::ostringstream out;
    write(out);
    return out.str();
}

void write_csv(const CsvTable &table, const std::string &path)
{
    if (path.empty() || path == "-")
    {
        table.write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    table.write(out);
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

} // namespace hynoma
