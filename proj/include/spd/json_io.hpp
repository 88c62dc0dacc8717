#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "spd/report.hpp"

namespace spd {

using ordered_json = nlohmann::ordered_json;

ordered_json stats_to_json(const RunStats& stats);
ordered_json report_to_json(const DeadlockReport& r, bool with_witness);

// {"stats": {...}, "reports": [...]} with a fixed field order, so identical
// runs serialize to identical bytes.
ordered_json result_to_json(const RunStats& stats, const std::vector<DeadlockReport>& reports,
                            bool with_witness);

std::string render_text(const RunStats& stats, const std::vector<DeadlockReport>& reports);

}  // namespace spd
