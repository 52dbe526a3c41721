#pragma once

#include <string>
#include <vector>

#include "pfaudit/dataset.hpp"

namespace pfaudit {

// CSV contract: header row required; lines starting with '#' are comments
// (writers put provenance there); reserved column names D, A, Y; every
// other column is a covariate parsed as a decimal number.

RawTable read_csv_table(const std::string& path);

// Parses CSV text already in memory (tests use this directly).
RawTable parse_csv(const std::string& text, const std::string& origin = "<memory>");

// Writes a dataset under the contract: columns D,A,Y then covariates.
// Each string in `provenance` becomes one leading '# ' comment line.
void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& provenance = {});

std::string dataset_to_csv(const Dataset& data,
                           const std::vector<std::string>& provenance = {});

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace pfaudit
