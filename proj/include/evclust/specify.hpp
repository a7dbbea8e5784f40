#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evclust/evidence.hpp"

namespace evclust {

/// Metalevel masses about one evidence item derived from single-move conflict
/// variations. `not_in[j]` supports "the item does not belong to subset j";
/// slot `subset_count()` of the partition stands for a prospective new subset
/// and is present only when the item shares its subset with others. `in_own`
/// supports "the item does belong to its own subset" and appears only when the
/// item sits alone and removing its subset would raise the domain conflict.
struct MembershipMasses {
    std::string evidence_id;
    std::size_t home;                     // subset index the item lives in
    std::size_t slot_count;               // subsets plus the new-subset slot when present
    bool has_new_slot;
    std::map<std::size_t, double> not_in;
    std::optional<double> in_own;
    std::vector<std::string> notes;       // limit conventions that fired
};

/// Combination of all membership masses for one item. `not_in_any` maps a
/// bitmask of subset slots S to the mass of "belongs to none of S" (mask 0 is
/// the full frame); `falsity` is the combination conflict, i.e. the mass that
/// the item belongs nowhere at all.
struct CombinedMembership {
    std::map<std::uint64_t, double> not_in_any;
    std::optional<double> in_own;
    double falsity;
};

/// Belief and plausibility of membership, per actual subset of the partition.
struct MembershipBeliefs {
    std::vector<double> belief;
    std::vector<double> plausibility;
};

struct SpecificationAssessment {
    std::string evidence_id;
    std::size_t home;
    MembershipMasses membership;
    CombinedMembership combined;
    MembershipBeliefs beliefs;
    double falsity;                                  // combination conflict k
    std::vector<double> credibility;                 // per subset
    MassFunction discounted_for_falsity;             // action bpa discounted by 1 - k
    std::vector<MassFunction> discounted_per_subset; // further discounted by each credibility
};

MembershipMasses membership_masses(const Partition& p, std::string_view evidence_id);

/// Product expansion of the membership masses over all subset slots.
/// The number of slots is capped at 20 (2^n expansion terms).
CombinedMembership combine_membership(const MembershipMasses& m);

MembershipBeliefs membership_beliefs(const MembershipMasses& m);

/// Discount an item's action bpa by its credibility 1 - falsity.
MassFunction falsity_discount(const Evidence& e, double falsity);

/// Per-subset credibility: the squared plausibility share of each subset,
/// weighted by how much belief is not already committed to the home subset.
std::vector<double> credibilities(const MembershipBeliefs& beliefs, std::size_t home);

std::vector<MassFunction> subset_specific_discount(const MassFunction& discounted,
                                                   std::span<const double> credibility);

/// Full specification of one evidence item against a partition.
SpecificationAssessment specify(const Partition& p, std::string_view evidence_id);

/// Specification of every item, in evidence order.
std::vector<SpecificationAssessment> specify_all(const Partition& p);

}  // namespace evclust
