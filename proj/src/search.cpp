#include "evclust/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace evclust {

namespace {

std::vector<Evidence> sorted_by_id(std::vector<Evidence> evidence)
{
    if (evidence.empty()) throw std::invalid_argument("no evidence to partition");
    std::sort(evidence.begin(), evidence.end(),
              [](const Evidence& a, const Evidence& b) { return a.id() < b.id(); });
    for (std::size_t i = 1; i < evidence.size(); ++i)
        if (evidence[i].id() == evidence[i - 1].id())
            throw std::invalid_argument("duplicate evidence id: " + evidence[i].id());
    return evidence;
}

// Memoized subset conflicts keyed by member bitmask; usable up to 16 items.
class ConflictCache {
public:
    explicit ConflictCache(const std::vector<Evidence>& evidence) : evidence_(evidence)
    {
        if (evidence.size() <= 16)
            table_.assign(std::size_t{1} << evidence.size(),
                          std::numeric_limits<double>::quiet_NaN());
    }

    double of_mask(std::uint32_t mask)
    {
        if (table_.empty()) return compute(mask);
        double& slot = table_[mask];
        if (std::isnan(slot)) slot = compute(mask);
        return slot;
    }

private:
    double compute(std::uint32_t mask) const
    {
        std::vector<Evidence> members;
        for (std::size_t i = 0; i < evidence_.size(); ++i)
            if (mask & (std::uint32_t{1} << i)) members.push_back(evidence_[i]);
        return subset_conflict(members);
    }

    const std::vector<Evidence>& evidence_;
    std::vector<double> table_;
};

double direct_conflict(const std::vector<Evidence>& evidence, const std::vector<std::size_t>& members)
{
    std::vector<Evidence> subset;
    subset.reserve(members.size());
    for (std::size_t i : members) subset.push_back(evidence[i]);
    return subset_conflict(subset);
}

struct Candidate {
    double mcf;
    std::size_t subset_count;
    std::vector<int> rgs;  // block label per evidence, labels in first-appearance order
};

bool better_than(const Candidate& a, const Candidate& b)
{
    if (a.mcf != b.mcf) return a.mcf < b.mcf;
    if (a.subset_count != b.subset_count) return a.subset_count < b.subset_count;
    return a.rgs < b.rgs;
}

std::vector<int> canonical_rgs(const std::vector<int>& assign)
{
    std::vector<int> relabel(assign.size(), -1);
    std::vector<int> out(assign.size());
    int next = 0;
    for (std::size_t i = 0; i < assign.size(); ++i) {
        int& label = relabel[assign[i]];
        if (label < 0) label = next++;
        out[i] = label;
    }
    return out;
}

Partition partition_from_labels(const std::vector<Evidence>& evidence,
                                const std::vector<int>& assign, int block_count,
                                const PriorCounts& prior)
{
    std::vector<std::vector<std::size_t>> blocks(block_count);
    for (std::size_t i = 0; i < assign.size(); ++i) blocks[assign[i]].push_back(i);
    return Partition(evidence, std::move(blocks), prior);
}

std::map<int, CountVerdict> count_verdicts(const PriorCounts& prior, double best_mcf, int best_r,
                                           int max_count)
{
    std::map<int, CountVerdict> verdicts;
    for (int j = 1; j <= max_count; ++j) {
        if (j == best_r) {
            verdicts[j] = CountVerdict::kBest;
        } else if (best_mcf < 1.0 - prior.mass(j)) {
            verdicts[j] = CountVerdict::kPrunedDomainBound;
        } else if (j < best_r && prior.mass(j) < prior.mass(best_r)) {
            verdicts[j] = CountVerdict::kPrunedPriorDominance;
        } else {
            verdicts[j] = CountVerdict::kExplored;
        }
    }
    return verdicts;
}

// rng helpers kept library-independent so seeded runs reproduce everywhere
std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound)
{
    return rng() % bound;
}

}  // namespace

std::set<int> prune_counts(const PriorCounts& prior, double current_best_mcf, int r_current,
                           const std::set<int>& candidates)
{
    std::set<int> survivors;
    for (int j : candidates) {
        if (j == r_current) {
            survivors.insert(j);
            continue;
        }
        if (current_best_mcf < 1.0 - prior.mass(j)) continue;
        if (j < r_current && prior.mass(j) < prior.mass(r_current)) continue;
        survivors.insert(j);
    }
    return survivors;
}

SearchResult exhaustive_minimize(std::vector<Evidence> evidence, const PriorCounts& prior,
                                 const SearchConfig& config)
{
    evidence = sorted_by_id(std::move(evidence));
    const std::size_t n = evidence.size();
    if (n > config.max_exhaustive_n)
        throw std::invalid_argument("too many evidence items for exhaustive enumeration");

    ConflictCache cache(evidence);
    const bool cached = n <= 16;

    std::vector<int> a(n, 0);
    Candidate best{std::numeric_limits<double>::infinity(), 0, {}};
    std::vector<double> trace;

    while (true) {
        int block_count = 1 + *std::max_element(a.begin(), a.end());
        std::vector<double> conflicts(block_count, 0.0);
        if (cached) {
            std::vector<std::uint32_t> masks(block_count, 0);
            for (std::size_t i = 0; i < n; ++i) masks[a[i]] |= std::uint32_t{1} << i;
            for (int b = 0; b < block_count; ++b) conflicts[b] = cache.of_mask(masks[b]);
        } else {
            std::vector<std::vector<std::size_t>> blocks(block_count);
            for (std::size_t i = 0; i < n; ++i) blocks[a[i]].push_back(i);
            for (int b = 0; b < block_count; ++b) conflicts[b] = direct_conflict(evidence, blocks[b]);
        }
        double c0 = domain_conflict(block_count, prior);
        double mcf = metaconflict_value(c0, conflicts);
        Candidate candidate{mcf, static_cast<std::size_t>(block_count), a};
        if (better_than(candidate, best)) {
            best = std::move(candidate);
            trace.push_back(mcf);
        }

        // next restricted growth string in lexicographic order
        std::size_t i = n;
        while (i-- > 1) {
            int prefix_max = *std::max_element(a.begin(), a.begin() + i);
            if (a[i] <= prefix_max) break;
        }
        if (i == 0) break;
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
    }

    Partition partition =
        partition_from_labels(evidence, best.rgs, static_cast<int>(best.subset_count), prior);
    MetaconflictAssessment assessment = metaconflict(partition);
    SearchResult result{std::move(partition), std::move(assessment), {}, std::move(trace)};
    result.explored_counts = count_verdicts(prior, result.assessment.metaconflict,
                                            static_cast<int>(best.subset_count),
                                            static_cast<int>(n));
    return result;
}

namespace {

// Mutable partition state for one hill-climbing run.
struct ClimbState {
    std::vector<int> assign;                      // evidence -> block label
    std::vector<std::vector<std::size_t>> blocks; // label -> members (ascending)
    std::vector<double> conflicts;                // per block
    double mcf = 0.0;

    std::size_t block_count() const { return blocks.size(); }
};

struct Move {
    std::size_t item;
    int target;  // block label, or -1 for a fresh singleton subset
    double mcf;
};

class HillClimber {
public:
    HillClimber(const std::vector<Evidence>& evidence, const PriorCounts& prior,
                ConflictCache& cache)
        : evidence_(evidence), prior_(prior), cache_(cache)
    {
    }

    // runs steepest descent to a local minimum; appends accepted values to trace
    ClimbState run(std::vector<int> assign, int block_count, std::vector<double>& trace)
    {
        ClimbState state;
        state.assign = std::move(assign);
        state.blocks.resize(block_count);
        for (std::size_t i = 0; i < state.assign.size(); ++i)
            state.blocks[state.assign[i]].push_back(i);
        state.conflicts.resize(block_count);
        for (int b = 0; b < block_count; ++b) state.conflicts[b] = block_conflict(state.blocks[b]);
        state.mcf = evaluate(static_cast<int>(state.block_count()), state.conflicts);
        trace.push_back(state.mcf);

        while (true) {
            std::optional<Move> move = best_move(state);
            if (!move) break;
            apply(state, *move);
            trace.push_back(state.mcf);
        }
        return state;
    }

private:
    double block_conflict(const std::vector<std::size_t>& members)
    {
        if (evidence_.size() <= 16) {
            std::uint32_t mask = 0;
            for (std::size_t i : members) mask |= std::uint32_t{1} << i;
            return cache_.of_mask(mask);
        }
        return direct_conflict(evidence_, members);
    }

    double block_conflict_without(const std::vector<std::size_t>& members, std::size_t item)
    {
        std::vector<std::size_t> rest;
        rest.reserve(members.size() - 1);
        for (std::size_t i : members)
            if (i != item) rest.push_back(i);
        return block_conflict(rest);
    }

    double block_conflict_with(const std::vector<std::size_t>& members, std::size_t item)
    {
        std::vector<std::size_t> grown(members);
        grown.insert(std::lower_bound(grown.begin(), grown.end(), item), item);
        return block_conflict(grown);
    }

    double evaluate(int block_count, std::span<const double> conflicts) const
    {
        return metaconflict_value(domain_conflict(block_count, prior_), conflicts);
    }

    std::optional<Move> best_move(const ClimbState& state)
    {
        std::optional<Move> best;
        auto consider = [&](std::size_t item, int target, double mcf) {
            if (mcf >= state.mcf) return;
            if (!best || mcf < best->mcf) best = Move{item, target, mcf};
        };

        const int r = static_cast<int>(state.block_count());
        for (std::size_t q = 0; q < state.assign.size(); ++q) {
            const int from = state.assign[q];
            const bool from_singleton = state.blocks[from].size() == 1;
            const double from_without =
                from_singleton ? 0.0 : block_conflict_without(state.blocks[from], q);

            for (int to = 0; to < r; ++to) {
                if (to == from) continue;
                std::vector<double> conflicts;
                conflicts.reserve(state.block_count());
                for (int b = 0; b < r; ++b) {
                    if (b == from) {
                        if (!from_singleton) conflicts.push_back(from_without);
                    } else if (b == to) {
                        conflicts.push_back(block_conflict_with(state.blocks[to], q));
                    } else {
                        conflicts.push_back(state.conflicts[b]);
                    }
                }
                int new_count = from_singleton ? r - 1 : r;
                consider(q, to, evaluate(new_count, conflicts));
            }

            if (!from_singleton) {
                // move q out into a subset of its own
                std::vector<double> conflicts;
                conflicts.reserve(state.block_count() + 1);
                for (int b = 0; b < r; ++b)
                    conflicts.push_back(b == from ? from_without : state.conflicts[b]);
                conflicts.push_back(0.0);
                consider(q, -1, evaluate(r + 1, conflicts));
            }
        }
        return best;
    }

    void apply(ClimbState& state, const Move& move)
    {
        const int from = state.assign[move.item];
        {
            auto& source = state.blocks[from];
            source.erase(std::find(source.begin(), source.end(), move.item));
        }
        int target = move.target;
        if (target < 0) {
            target = static_cast<int>(state.block_count());
            state.blocks.emplace_back();
            state.conflicts.push_back(0.0);
        }
        {
            auto& dest = state.blocks[target];
            dest.insert(std::lower_bound(dest.begin(), dest.end(), move.item), move.item);
            state.assign[move.item] = target;
            state.conflicts[target] = block_conflict(dest);
        }
        if (state.blocks[from].empty()) {
            state.blocks.erase(state.blocks.begin() + from);
            state.conflicts.erase(state.conflicts.begin() + from);
            for (auto& label : state.assign)
                if (label > from) --label;
        } else {
            state.conflicts[from] = block_conflict(state.blocks[from]);
        }
        state.mcf = evaluate(static_cast<int>(state.block_count()), state.conflicts);
    }

    const std::vector<Evidence>& evidence_;
    const PriorCounts& prior_;
    ConflictCache& cache_;
};

}  // namespace

SearchResult local_minimize(std::vector<Evidence> evidence, const PriorCounts& prior,
                            const SearchConfig& config)
{
    evidence = sorted_by_id(std::move(evidence));
    const std::size_t n = evidence.size();
    if (config.restarts < 1) throw std::invalid_argument("restarts must be at least 1");

    ConflictCache cache(evidence);
    HillClimber climber(evidence, prior, cache);
    std::mt19937_64 rng(config.rng_seed);

    std::set<int> all_counts;
    if (config.candidate_counts) {
        for (int c : *config.candidate_counts)
            if (c >= 1 && c <= static_cast<int>(n)) all_counts.insert(c);
    }
    if (all_counts.empty())
        for (int c = 1; c <= static_cast<int>(n); ++c) all_counts.insert(c);

    std::optional<ClimbState> best_state;
    Candidate best{std::numeric_limits<double>::infinity(), 0, {}};
    std::vector<double> best_trace;

    for (int restart = 0; restart < config.restarts; ++restart) {
        std::vector<int> assign(n, 0);
        int block_count = 1;
        if (restart > 0) {
            std::set<int> allowed = all_counts;
            if (best_state)
                allowed = prune_counts(prior, best.mcf, static_cast<int>(best.subset_count),
                                       all_counts);
            if (allowed.empty()) allowed = all_counts;
            std::vector<int> counts(allowed.begin(), allowed.end());
            block_count = counts[next_below(rng, counts.size())];

            // r seeded blocks, the rest spread at random (Fisher-Yates kept
            // explicit so seeded runs reproduce across standard libraries)
            std::vector<std::size_t> perm(n);
            for (std::size_t i = 0; i < n; ++i) perm[i] = i;
            for (std::size_t i = n - 1; i > 0; --i)
                std::swap(perm[i], perm[next_below(rng, i + 1)]);
            for (std::size_t k = 0; k < n; ++k)
                assign[perm[k]] = k < static_cast<std::size_t>(block_count)
                                      ? static_cast<int>(k)
                                      : static_cast<int>(next_below(rng, block_count));
        }

        std::vector<double> trace;
        ClimbState state = climber.run(std::move(assign), block_count, trace);
        Candidate candidate{state.mcf, state.block_count(), canonical_rgs(state.assign)};
        if (better_than(candidate, best)) {
            best = std::move(candidate);
            best_state = std::move(state);
            best_trace = std::move(trace);
        }
    }

    std::vector<std::vector<std::size_t>> blocks = best_state->blocks;
    Partition partition(evidence, std::move(blocks), prior);
    MetaconflictAssessment assessment = metaconflict(partition);
    SearchResult result{std::move(partition), std::move(assessment), {}, std::move(best_trace)};
    result.explored_counts =
        count_verdicts(prior, result.assessment.metaconflict,
                       static_cast<int>(best_state->block_count()), static_cast<int>(n));
    return result;
}

}  // namespace evclust
