#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "evclust/evidence.hpp"

namespace evclust {

struct SearchConfig {
    std::size_t max_exhaustive_n = 10;
    int restarts = 16;
    std::uint64_t rng_seed = 0;
    std::optional<std::set<int>> candidate_counts;  // restricts random restart sizes
};

enum class CountVerdict {
    kBest,                 // the returned minimum lives here
    kExplored,             // no dominance rule excludes this count
    kPrunedDomainBound,    // best mcf already below this count's domain conflict
    kPrunedPriorDominance  // a larger count with more prior mass dominates
};

struct SearchResult {
    Partition best;
    MetaconflictAssessment assessment;
    std::map<int, CountVerdict> explored_counts;
    std::vector<double> trace;  // criterion value per accepted step of the winning run
};

/// Global minimum of the metaconflict criterion by enumerating every set
/// partition of the evidence. Ties resolve to fewer subsets, then to the
/// lexicographically smallest assignment in evidence-id order. Subsets of the
/// result are ordered by their smallest evidence id.
SearchResult exhaustive_minimize(std::vector<Evidence> evidence, const PriorCounts& prior,
                                 const SearchConfig& config = {});

/// Steepest-descent search: repeatedly apply the best single-evidence move
/// (to another subset, or out into a new subset) until no move improves the
/// criterion. The first start puts everything into one subset; the remaining
/// restarts draw random assignments. Subset order of the result follows the
/// winning trajectory.
SearchResult local_minimize(std::vector<Evidence> evidence, const PriorCounts& prior,
                            const SearchConfig& config = {});

/// Candidate subset counts from `candidates` that are NOT provably dominated
/// given an achieved minimum: j is dropped when best_mcf < 1 - m(E_j), or when
/// j < r_current and m(E_j) < m(E_{r_current}). r_current itself always stays.
std::set<int> prune_counts(const PriorCounts& prior, double current_best_mcf, int r_current,
                           const std::set<int>& candidates);

}  // namespace evclust
