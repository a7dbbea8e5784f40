#include "evclust/specify.hpp"

#include <algorithm>
#include <cmath>

namespace evclust {

namespace {

constexpr std::size_t kMaxExpansionSlots = 20;

// (c_after - c_before) / (1 - c_before) with the limit convention for a
// denominator of zero: 1 for a positive numerator, 0 otherwise.
double conflict_increase_mass(double before, double after, const char* what,
                              std::vector<std::string>& notes)
{
    double numerator = after - before;
    double denominator = 1.0 - before;
    if (denominator <= kMassTolerance) {
        notes.push_back(std::string(what) + ": conflict already 1, using limit value");
        return numerator > kMassTolerance ? 1.0 : 0.0;
    }
    return std::clamp(numerator / denominator, 0.0, 1.0);
}

double subset_conflict_without(const Partition& p, std::size_t subset, std::size_t item)
{
    std::vector<Evidence> members;
    for (std::size_t idx : p.subset(subset))
        if (idx != item) members.push_back(p.evidence_at(idx));
    return subset_conflict(members);
}

double subset_conflict_with(const Partition& p, std::size_t subset, std::size_t item)
{
    std::vector<Evidence> members = p.subset_members(subset);
    members.push_back(p.evidence_at(item));
    return subset_conflict(members);
}

}  // namespace

MembershipMasses membership_masses(const Partition& p, std::string_view evidence_id)
{
    auto item = p.find_evidence(evidence_id);
    if (!item) throw std::invalid_argument("unknown evidence id: " + std::string(evidence_id));

    MembershipMasses out;
    out.evidence_id = std::string(evidence_id);
    out.home = p.subset_of(*item);
    const int r = static_cast<int>(p.subset_count());
    const bool alone = p.subset(out.home).size() == 1;
    out.has_new_slot = !alone;
    out.slot_count = p.subset_count() + (alone ? 0 : 1);

    const double c0 = domain_conflict(r, p.prior());

    // moving the item into each of the other subsets raises that conflict
    for (std::size_t j = 0; j < p.subset_count(); ++j) {
        if (j == out.home) continue;
        double before = subset_conflict(p.subset_members(j));
        double after = subset_conflict_with(p, j, *item);
        out.not_in[j] = conflict_increase_mass(before, after,
                                               ("insertion into subset " + std::to_string(j + 1)).c_str(),
                                               out.notes);
    }

    if (!alone) {
        // taking the item out lowers its own subset's conflict
        double own = subset_conflict(p.subset_members(out.home));
        double without = subset_conflict_without(p, out.home, *item);
        out.not_in[out.home] =
            conflict_increase_mass(without, own, "removal from own subset", out.notes);

        // opening a fresh subset changes only the domain conflict
        double c0_new = domain_conflict(r + 1, p.prior());
        if (c0_new < c0) {
            out.not_in[p.subset_count()] = 0.0;
            out.notes.push_back("new-subset move lowers the domain conflict; no evidence against it");
        } else {
            out.not_in[p.subset_count()] =
                conflict_increase_mass(c0, c0_new, "new-subset move", out.notes);
        }
    } else {
        // a lone item dissolves its subset when moved; compare domain
        // conflicts at r and r - 1
        double c0_fewer = r == 1 ? 1.0 - p.prior().mass(0) : domain_conflict(r - 1, p.prior());
        if (c0 > c0_fewer) {
            out.not_in[out.home] =
                conflict_increase_mass(c0_fewer, c0, "dissolving own subset", out.notes);
        } else if (c0 < c0_fewer) {
            out.in_own = c0 / c0_fewer;
        } else {
            out.not_in[out.home] = 0.0;
        }
    }
    return out;
}

CombinedMembership combine_membership(const MembershipMasses& m)
{
    if (m.not_in.size() > kMaxExpansionSlots)
        throw std::domain_error("membership combination over more than 20 subsets");

    CombinedMembership out;
    out.in_own = m.in_own;

    std::vector<double> masses;
    masses.reserve(m.not_in.size());
    std::vector<std::size_t> slots;
    for (const auto& [slot, mass] : m.not_in) {
        slots.push_back(slot);
        masses.push_back(mass);
    }

    double all_product = m.in_own ? 0.0 : 1.0;
    if (!m.in_own)
        for (double mass : masses) all_product *= mass;
    out.falsity = all_product;

    if (1.0 - out.falsity <= kMassTolerance) {
        // certain to belong nowhere; the combined bpa degenerates entirely
        out.falsity = 1.0;
        return out;
    }

    const double in_mass = m.in_own.value_or(0.0);
    const double scale = (1.0 - in_mass) / (1.0 - out.falsity);
    const std::uint64_t terms = std::uint64_t{1} << masses.size();
    for (std::uint64_t pick = 0; pick < terms; ++pick) {
        if (!m.in_own && pick + 1 == terms && terms > 1) continue;  // the all-"not in" term is the conflict
        double product = 1.0;
        std::uint64_t mask = 0;
        for (std::size_t b = 0; b < masses.size(); ++b) {
            if (pick & (std::uint64_t{1} << b)) {
                product *= masses[b];
                mask |= std::uint64_t{1} << slots[b];
            } else {
                product *= 1.0 - masses[b];
            }
        }
        if (product != 0.0) out.not_in_any[mask] += product * scale;
    }
    return out;
}

MembershipBeliefs membership_beliefs(const MembershipMasses& m)
{
    const std::size_t subsets = m.slot_count - (m.has_new_slot ? 1 : 0);
    MembershipBeliefs out;
    out.belief.assign(subsets, 0.0);
    out.plausibility.assign(subsets, 0.0);

    if (m.in_own) {
        double others = 1.0;
        for (const auto& [slot, mass] : m.not_in) others *= mass;
        out.belief[m.home] = *m.in_own + (1.0 - *m.in_own) * others;
        out.plausibility[m.home] = 1.0;
        for (const auto& [slot, mass] : m.not_in)
            if (slot < subsets) out.plausibility[slot] = (1.0 - *m.in_own) * (1.0 - mass);
        return out;
    }

    double all_product = 1.0;
    for (const auto& [slot, mass] : m.not_in) all_product *= mass;
    if (1.0 - all_product <= kMassTolerance) return out;  // belongs nowhere: all zero
    for (const auto& [slot, mass] : m.not_in)
        if (slot < subsets) out.plausibility[slot] = (1.0 - mass) / (1.0 - all_product);
    return out;
}

MassFunction falsity_discount(const Evidence& e, double falsity)
{
    if (falsity < 0.0 || falsity > 1.0) throw std::invalid_argument("falsity outside [0,1]");
    return discount(e.action_bpa(), 1.0 - falsity);
}

std::vector<double> credibilities(const MembershipBeliefs& beliefs, std::size_t home)
{
    const std::size_t subsets = beliefs.plausibility.size();
    if (home >= subsets) throw std::invalid_argument("home subset out of range");
    std::vector<double> alpha(subsets, 0.0);
    double total = 0.0;
    for (double pls : beliefs.plausibility) total += pls;
    if (total <= kMassTolerance) return alpha;  // no subset is plausible at all

    const double bel_home = beliefs.belief[home];
    for (std::size_t j = 0; j < subsets; ++j) {
        double share = beliefs.plausibility[j] * beliefs.plausibility[j] / total;
        alpha[j] = (1.0 - bel_home) * share + (j == home ? bel_home : 0.0);
    }
    return alpha;
}

std::vector<MassFunction> subset_specific_discount(const MassFunction& discounted,
                                                   std::span<const double> credibility)
{
    std::vector<MassFunction> out;
    out.reserve(credibility.size());
    for (double alpha : credibility) out.push_back(discount(discounted, alpha));
    return out;
}

SpecificationAssessment specify(const Partition& p, std::string_view evidence_id)
{
    auto item = p.find_evidence(evidence_id);
    if (!item) throw std::invalid_argument("unknown evidence id: " + std::string(evidence_id));

    MembershipMasses membership = membership_masses(p, evidence_id);
    CombinedMembership combined = combine_membership(membership);
    MembershipBeliefs beliefs = membership_beliefs(membership);
    const double falsity = combined.falsity;
    const std::size_t home = membership.home;
    MassFunction discounted = falsity_discount(p.evidence_at(*item), falsity);
    std::vector<double> alpha = credibilities(beliefs, home);
    std::vector<MassFunction> per_subset = subset_specific_discount(discounted, alpha);

    return SpecificationAssessment{std::string(evidence_id),
                                   home,
                                   std::move(membership),
                                   std::move(combined),
                                   std::move(beliefs),
                                   falsity,
                                   std::move(alpha),
                                   std::move(discounted),
                                   std::move(per_subset)};
}

std::vector<SpecificationAssessment> specify_all(const Partition& p)
{
    std::vector<SpecificationAssessment> out;
    out.reserve(p.evidence().size());
    for (const Evidence& e : p.evidence()) out.push_back(specify(p, e.id()));
    return out;
}

}  // namespace evclust
