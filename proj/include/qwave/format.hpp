// Copyright 2026 The qwave Authors
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

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qwave/error.hpp"

namespace qwave {

/// Shortest round-trip decimal form; identical input always yields identical text.
inline std::string format_double(double value) {
    if (value == 0.0) {
        return "0";  // folds -0 into 0
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, end);
}

inline double parse_double(std::string_view text, const std::string &context) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc{} && ptr == text.data() + text.size(), ErrorKind::validation,
            context + ": cannot parse number '" + std::string(text) + "'");
    return value;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with a mandatory header row.
inline CsvTable read_csv(const std::string &path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::io, "cannot open " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            table.header = cells;
            first = false;
            continue;
        }
        require(cells.size() == table.header.size(), ErrorKind::validation,
                path + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                    " columns");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto &c : cells) row.push_back(parse_double(c, path + ":" + std::to_string(line_no)));
        table.rows.push_back(std::move(row));
    }
    require(!first, ErrorKind::validation, path + ": missing CSV header");
    return table;
}

}  // namespace qwave
