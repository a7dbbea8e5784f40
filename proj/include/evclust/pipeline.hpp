#pragma once

#include <optional>
#include <string>

#include "evclust/posterior.hpp"
#include "evclust/scenario.hpp"
#include "evclust/search.hpp"
#include "evclust/specify.hpp"

namespace evclust {

enum class PipelineStage { kPartition, kSpecify, kPosterior };

enum class OutputFormat { kHuman, kStructured };

/// Everything one run produces. Later-stage fields stay empty when the run
/// stopped at an earlier stage.
struct Report {
    int schema_version = 1;
    std::uint64_t seed = 0;
    std::string algorithm;
    Partition partition;
    MetaconflictAssessment assessment;
    std::map<int, CountVerdict> count_verdicts;
    std::vector<double> trace;
    std::vector<SpecificationAssessment> specification;
    std::vector<SubsetExistence> existence;
    std::map<std::uint64_t, double> existence_combination;
    std::optional<CountBpa> counts;
    std::optional<PosteriorDistribution> posterior_distribution;
    std::vector<std::string> diagnostics;
};

/// Partition the evidence, specify every item against the result and derive
/// the posterior over the number of events. Uses exhaustive enumeration when
/// the instance is small enough per the config, hill climbing otherwise.
Report run_pipeline(const Scenario& s, PipelineStage upto = PipelineStage::kPosterior);

std::string render_report(const Report& r, OutputFormat format);

nlohmann::ordered_json report_to_json(const Report& r);

}  // namespace evclust
