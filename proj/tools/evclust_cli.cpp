#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "evclust/pipeline.hpp"

namespace {

struct Options {
    std::string scenario_path;
    std::string format = "human";
    std::optional<std::uint64_t> seed;
    std::optional<int> max_exhaustive;
    std::optional<int> restarts;
};

void add_common_flags(CLI::App* cmd, Options& opts)
{
    cmd->add_option("--scenario", opts.scenario_path, "scenario file to load")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"human", "structured"}));
    cmd->add_option("--seed", opts.seed, "override the scenario rng seed");
    cmd->add_option("--max-exhaustive", opts.max_exhaustive,
                    "largest evidence count enumerated exhaustively")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--restarts", opts.restarts, "hill-climbing restarts")
        ->check(CLI::PositiveNumber);
}

int run(const Options& opts, evclust::PipelineStage upto)
{
    evclust::Scenario scenario = evclust::load_scenario(opts.scenario_path);
    if (opts.seed) scenario.config.rng_seed = *opts.seed;
    if (opts.max_exhaustive) scenario.config.max_exhaustive_n = *opts.max_exhaustive;
    if (opts.restarts) scenario.config.restarts = *opts.restarts;

    evclust::Report report = evclust::run_pipeline(scenario, upto);
    evclust::OutputFormat format = opts.format == "structured"
                                       ? evclust::OutputFormat::kStructured
                                       : evclust::OutputFormat::kHuman;
    std::cout << evclust::render_report(report, format);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cluster weakly specified evidence by conflict minimization and derive a "
                 "posterior distribution over the number of events"};
    app.require_subcommand(1);

    Options opts;
    evclust::PipelineStage upto = evclust::PipelineStage::kPosterior;

    CLI::App* partition = app.add_subcommand("partition", "search for the best partition only");
    partition->callback([&] { upto = evclust::PipelineStage::kPartition; });
    CLI::App* specify =
        app.add_subcommand("specify", "partition, then assess every item's membership");
    specify->callback([&] { upto = evclust::PipelineStage::kSpecify; });
    CLI::App* posterior =
        app.add_subcommand("posterior", "full pipeline up to the posterior distribution");
    posterior->callback([&] { upto = evclust::PipelineStage::kPosterior; });
    CLI::App* full = app.add_subcommand("run", "full pipeline (same as posterior)");
    full->callback([&] { upto = evclust::PipelineStage::kPosterior; });

    for (CLI::App* cmd : {partition, specify, posterior, full}) add_common_flags(cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(opts, upto);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
