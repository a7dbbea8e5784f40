#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "evclust/specify.hpp"

namespace evclust {

/// Support for the existence of one subset, accumulated from the evidence
/// discounted for that subset, then discounted again by how strongly the
/// membership evidence suggests the subset is actually empty.
struct SubsetExistence {
    std::size_t subset;
    double mass_exists;            // support that the subset is real
    double mass_theta;
    double combination_conflict;   // conflict among the contributing bpas
    double emptiness_credibility;  // 1 - support that the subset is empty
    double discounted_exists;
    double discounted_theta;
};

/// Masses on "at least r subsets exist", plus the uncommitted remainder.
struct CountBpa {
    std::map<int, double> at_least;
    double theta;
};

struct PosteriorDistribution {
    std::map<int, double> masses;
    double conflict;  // conflict between the prior and the count evidence
};

/// Existence support of one subset from the bpas discounted for it:
/// everything the combination commits to anything beyond the full frame.
/// Returns (mass_exists, mass_theta, conflict).
struct ExistenceSupport {
    double mass_exists;
    double mass_theta;
    double conflict;
};
ExistenceSupport subset_existence(std::span<const MassFunction> discounted);

/// 1 minus the support that subset i is empty, the latter being the product
/// over every evidence item of its mass against residing in subset i.
double emptiness_credibility(std::size_t subset, std::span<const MembershipMasses> memberships);

/// Product expansion of the discounted existence bpas: bitmask of subset
/// indices -> mass that exactly that conjunction of subsets is supported.
/// Mask 0 is the full frame. Capped at 20 subsets.
std::map<std::uint64_t, double> combine_existence(std::span<const SubsetExistence> subsets);

/// Regroup conjunction masses by their length into "at least r" masses.
CountBpa count_bpa(const std::map<std::uint64_t, double>& combined);

/// Dempster combination of the prior over event counts with the count bpa.
PosteriorDistribution posterior(const PriorCounts& prior, const CountBpa& counts);

/// Existence pipeline for every subset of a partition, given the per-item
/// specification assessments.
std::vector<SubsetExistence> subset_existences(const Partition& p,
                                               std::span<const SpecificationAssessment> specs);

}  // namespace evclust
