#pragma once

#include <string>

#include "pfaudit/fairness.hpp"

namespace pfaudit {

// Human-readable tables, one block per report section.
std::string report_to_text(const FairnessReport& report);

// Flat CSV for plotting: block,key1,key2,metric,value with provenance in
// leading '#' comments. Undefined cells render as NA.
std::string report_to_csv(const FairnessReport& report);

} // namespace pfaudit
