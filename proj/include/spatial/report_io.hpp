#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spatial/analysis.hpp"
#include "spatial/game.hpp"
#include "spatial/learning.hpp"
#include "spatial/mobility.hpp"

namespace spatial {

// Nine significant digits, "%.9g".
std::string format_number(double v);

// FNV-1a over the channel indices, as 16 lowercase hex digits.
std::string channel_profile_hash(const ChannelProfile& a);

std::string join_indices(const std::vector<std::size_t>& v, char sep = ' ');

// Plot-ready traces. Fixed column order, header row first.
void write_learning_csv(std::ostream& out, const LearningResult& r);
void write_mobility_csv(std::ostream& out, const MobilityResult& r);

nlohmann::json profile_json(const Profile& p);
nlohmann::json report_json(const EquilibriumReport& r);
nlohmann::json report_json(const JointReport& r);

}  // namespace spatial
