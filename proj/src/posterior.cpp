#include "evclust/posterior.hpp"

#include <bit>
#include <cmath>

namespace evclust {

namespace {

constexpr std::size_t kMaxExistenceSubsets = 20;

}  // namespace

ExistenceSupport subset_existence(std::span<const MassFunction> discounted)
{
    if (discounted.empty()) throw std::invalid_argument("no bpas supplied for subset existence");
    double conflict = conflict_of(discounted);
    if (1.0 - conflict <= kMassTolerance)
        throw TotalConflictError("subset existence combination is totally conflicting");
    double theta_product = 1.0;
    for (const auto& m : discounted) theta_product *= m.theta_mass();
    double theta = theta_product / (1.0 - conflict);
    return ExistenceSupport{1.0 - theta, theta, conflict};
}

double emptiness_credibility(std::size_t subset, std::span<const MembershipMasses> memberships)
{
    double empty_support = 1.0;
    for (const auto& m : memberships) {
        if (m.home == subset && m.in_own) return 1.0;  // positive evidence it is occupied
        auto it = m.not_in.find(subset);
        double against = it == m.not_in.end() ? 0.0 : it->second;
        if (m.home != subset && m.in_own) {
            // an item pinned to its own subset elsewhere counts only through
            // the chance it is not actually there
            empty_support *= 1.0 - (1.0 - against) * (1.0 - *m.in_own);
        } else {
            empty_support *= against;
        }
    }
    return 1.0 - empty_support;
}

std::map<std::uint64_t, double> combine_existence(std::span<const SubsetExistence> subsets)
{
    if (subsets.empty()) throw std::invalid_argument("no subsets to combine");
    if (subsets.size() > kMaxExistenceSubsets)
        throw std::domain_error("existence combination over more than 20 subsets");

    std::map<std::uint64_t, double> out;
    const std::uint64_t terms = std::uint64_t{1} << subsets.size();
    for (std::uint64_t mask = 0; mask < terms; ++mask) {
        double product = 1.0;
        for (std::size_t i = 0; i < subsets.size(); ++i)
            product *= (mask & (std::uint64_t{1} << i)) ? subsets[i].discounted_exists
                                                        : subsets[i].discounted_theta;
        out[mask] = product;
    }
    return out;
}

CountBpa count_bpa(const std::map<std::uint64_t, double>& combined)
{
    CountBpa out{{}, 0.0};
    for (const auto& [mask, mass] : combined) {
        int length = std::popcount(mask);
        if (length == 0)
            out.theta += mass;
        else
            out.at_least[length] += mass;
    }
    return out;
}

PosteriorDistribution posterior(const PriorCounts& prior, const CountBpa& counts)
{
    // conflict: prior mass on i meeting "at least j" evidence with j > i
    double conflict = 0.0;
    for (const auto& [i, p] : prior.masses())
        for (const auto& [j, mass] : counts.at_least)
            if (j > i) conflict += p * mass;
    if (1.0 - conflict <= kMassTolerance)
        throw TotalConflictError("prior and count evidence are totally contradictory");

    PosteriorDistribution out{{}, conflict};
    for (const auto& [i, p] : prior.masses()) {
        double agreeing = counts.theta;
        for (const auto& [j, mass] : counts.at_least)
            if (j <= i) agreeing += mass;
        out.masses[i] = p * agreeing / (1.0 - conflict);
    }
    return out;
}

std::vector<SubsetExistence> subset_existences(const Partition& p,
                                               std::span<const SpecificationAssessment> specs)
{
    std::vector<MembershipMasses> memberships;
    memberships.reserve(specs.size());
    for (const auto& s : specs) memberships.push_back(s.membership);

    std::vector<SubsetExistence> out;
    out.reserve(p.subset_count());
    for (std::size_t i = 0; i < p.subset_count(); ++i) {
        std::vector<MassFunction> discounted;
        discounted.reserve(specs.size());
        for (const auto& s : specs) discounted.push_back(s.discounted_per_subset.at(i));
        ExistenceSupport support = subset_existence(discounted);
        double alpha = emptiness_credibility(i, memberships);
        out.push_back(SubsetExistence{i, support.mass_exists, support.mass_theta,
                                      support.conflict, alpha, alpha * support.mass_exists,
                                      1.0 - alpha + alpha * support.mass_theta});
    }
    return out;
}

}  // namespace evclust
