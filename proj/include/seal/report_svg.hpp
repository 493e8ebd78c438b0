#pragma once

#include <filesystem>
#include <vector>

#include "seal/metrics.hpp"

namespace seal {

// Static SVG line chart of per-case scores: one polyline per model plus the
// acceptance and excellence lines, cases on the x axis sorted hardest first.
void write_report_svg(const std::vector<SealReport>& reports, const LineSet& lines,
                      const std::filesystem::path& path);

}  // namespace seal
