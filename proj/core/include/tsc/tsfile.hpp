#pragma once

#include <filesystem>
#include <string_view>

#include "tsc/timescale.hpp"

namespace tsc {

/// Parses the line-oriented time-scale description format:
///
///   # comment
///   window <start> <end>
///   interval <a> <b>        (repeatable)
///   points <t1> <t2> ...    (repeatable)
///   tail continuous | uniform <h> | geometric <q> | none
///
/// Segments must lie inside the window, cover both window edges and stay
/// disjoint; violations are reported as SyntaxError prefixed with the line
/// number.
TimeScale parse_timescale(std::string_view text);

TimeScale load_timescale_file(const std::filesystem::path& path);

}  // namespace tsc
