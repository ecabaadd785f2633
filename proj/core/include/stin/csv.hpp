// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace stin {

// Shortest decimal that parses back to the same double; dot decimal always.
std::string format_double(double v);
double parse_double_exact(const std::string& s);

using CsvTable = std::vector<std::vector<std::string>>;

// Plain comma-separated rows; fields here never contain commas or quotes.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const CsvTable& rows);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace stin
