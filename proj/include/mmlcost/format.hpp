#pragma once

#include "mmlcost/analysis.hpp"

#include <string>

namespace mmlcost {

// Fixed column header of the tabled report, including the trailing newline.
std::string tabled_header();

// One semicolon-delimited row per program/evidence pair.  digits is the
// number of decimals, derived from the precision option.
std::string format_tabled_row(const Analysis& a, const std::string& name,
                              int digits);

// The indented per-pair report.  With debug set, per-rule cost lines and the
// derivation dumps precede the block, each line prefixed "-- ".
std::string format_plain(const Analysis& a, const std::string& name,
                         int digits, bool debug);

}  // namespace mmlcost
