#pragma once

#include <string>

#include "luci/analysis.h"
#include "luci/gauge.h"

namespace luci {

// DropoutConfig JSON: {"d": 11, "broken_qubits": [[x,y],...],
// "broken_couplers": [[[x,y],[x,y]],...], "seed": 42}. Writes are canonically
// sorted; readers accept any order.
std::string config_to_json(const DropoutConfig& cfg);
DropoutConfig config_from_json(const std::string& text);

// Operator-set dump: ids, bases, kinds, supports, regions, superstabilizer
// groups, removed qubits.
std::string operators_to_json(const GaugeStructure& gs);

// Analysis reports.
std::string volume_report_json(const VolumeStats& stats);
std::string volume_report_csv(const VolumeStats& stats);
std::string frequency_report_json(const FrequencyStats& stats, int rounds);
std::string frequency_report_csv(const FrequencyStats& stats);
std::string paths_report_json(const PathCount& z_paths, const PathCount& x_paths);

}  // namespace luci
