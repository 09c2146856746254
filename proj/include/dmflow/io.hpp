#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "dmflow/bifurcation.hpp"
#include "dmflow/ctm.hpp"
#include "dmflow/extended_networks.hpp"
#include "dmflow/poincare_map.hpp"
#include "dmflow/validation.hpp"

namespace dmflow {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double x);

// CSV emitters: comma separated, header row, LF endings.
std::string orbit_csv(const std::vector<double>& orbit);
std::string cobweb_csv(const std::vector<CobwebSegment>& segments);
std::string bifurcation_csv(const std::vector<BifurcationPoint>& points);
std::string run_record_csv(const RunRecord& record);
std::string dmn_orbit_csv(const std::vector<DmnMapState>& orbit);

nlohmann::json to_json(const DmSpec& spec);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const BifurcationPoint& point);
nlohmann::json to_json(const std::vector<BifurcationPoint>& points);
nlohmann::json to_json(const RunRecord& record);
nlohmann::json to_json(const OscillationReport& report);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const DmnClassification& c);
nlohmann::json to_json(const DmnSimReport& r);
nlohmann::json to_json(const BeltwaySimReport& r);
nlohmann::json orbit_json(const std::vector<double>& orbit,
                          const std::vector<CobwebSegment>& segments);

}  // namespace dmflow
