#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "evclust/evidence.hpp"
#include "evclust/search.hpp"

namespace evclust {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A complete problem instance: the action frame, the possible events, the
/// evidence, the prior over event counts and the search configuration.
struct Scenario {
    int schema_version = 1;
    Frame action_frame;
    std::vector<std::string> event_labels;
    std::vector<Evidence> evidence;
    PriorCounts prior;
    SearchConfig config;
};

Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json scenario_to_json(const Scenario& s);

}  // namespace evclust
