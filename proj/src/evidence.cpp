#include "evclust/evidence.hpp"

#include <algorithm>
#include <cmath>

namespace evclust {

Evidence::Evidence(std::string id, Frame action_frame, std::vector<WeightedFocal> action,
                   std::uint64_t event_bits)
    : id_(std::move(id)),
      frame_(std::move(action_frame)),
      action_(std::move(action)),
      event_bits_(event_bits)
{
    if (id_.empty()) throw std::invalid_argument("evidence needs a non-empty id");
    if (event_bits_ == 0) throw std::invalid_argument("evidence " + id_ + " has an empty event part");
    double total = 0.0;
    for (const auto& [focal, mass] : action_) {
        if (focal.empty())
            throw std::invalid_argument("evidence " + id_ + " assigns mass to the empty action set");
        if (!focal.subset_of(frame_.full()))
            throw std::invalid_argument("evidence " + id_ + " uses hypotheses outside the frame");
        if (mass < 0.0 || mass > 1.0)
            throw std::invalid_argument("evidence " + id_ + " has a mass outside [0,1]");
        total += mass;
    }
    if (total > 1.0 + kMassTolerance)
        throw std::invalid_argument("evidence " + id_ + " action masses exceed 1");
    theta_mass_ = std::max(0.0, 1.0 - total);
}

MassFunction Evidence::action_bpa() const
{
    std::map<FocalSet, double> masses;
    for (const auto& [focal, mass] : action_) masses[focal] += mass;
    if (theta_mass_ > 0.0) masses[frame_.full()] += theta_mass_;
    return MassFunction(frame_, std::move(masses));
}

PriorCounts::PriorCounts(std::map<int, double> masses) : masses_(std::move(masses))
{
    double total = 0.0;
    for (auto it = masses_.begin(); it != masses_.end();) {
        const auto& [count, p] = *it;
        if (count < 0) throw std::invalid_argument("negative event count in prior");
        if (p < 0.0 || p > 1.0 + kMassTolerance)
            throw std::invalid_argument("prior probability outside [0,1]");
        total += p;
        if (p == 0.0)
            it = masses_.erase(it);
        else
            ++it;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("prior over event counts does not sum to 1");
    // exact unit sum keeps the posterior a probability function
    if (total != 1.0)
        for (auto& [count, p] : masses_) p /= total;
}

double PriorCounts::mass(int count) const
{
    auto it = masses_.find(count);
    return it == masses_.end() ? 0.0 : it->second;
}

int PriorCounts::max_support() const
{
    return masses_.empty() ? 0 : masses_.rbegin()->first;
}

Partition::Partition(std::vector<Evidence> evidence, std::vector<std::vector<std::size_t>> subsets,
                     PriorCounts prior)
    : evidence_(std::move(evidence)), subsets_(std::move(subsets)), prior_(std::move(prior))
{
    if (subsets_.empty()) throw std::invalid_argument("partition needs at least one subset");
    std::vector<bool> seen(evidence_.size(), false);
    for (auto& subset : subsets_) {
        if (subset.empty()) throw std::invalid_argument("partition contains an empty subset");
        for (std::size_t idx : subset) {
            if (idx >= evidence_.size())
                throw std::invalid_argument("subset references unknown evidence");
            if (seen[idx]) throw std::invalid_argument("evidence assigned to several subsets");
            seen[idx] = true;
        }
        std::sort(subset.begin(), subset.end(), [&](std::size_t a, std::size_t b) {
            return evidence_[a].id() < evidence_[b].id();
        });
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw std::invalid_argument("partition does not cover all evidence");
}

std::size_t Partition::subset_of(std::size_t evidence_index) const
{
    for (std::size_t i = 0; i < subsets_.size(); ++i)
        for (std::size_t idx : subsets_[i])
            if (idx == evidence_index) return i;
    throw std::invalid_argument("evidence index not in partition");
}

std::optional<std::size_t> Partition::find_evidence(std::string_view id) const
{
    for (std::size_t i = 0; i < evidence_.size(); ++i)
        if (evidence_[i].id() == id) return i;
    return std::nullopt;
}

std::vector<Evidence> Partition::subset_members(std::size_t i) const
{
    std::vector<Evidence> members;
    members.reserve(subsets_.at(i).size());
    for (std::size_t idx : subsets_.at(i)) members.push_back(evidence_[idx]);
    return members;
}

namespace {

// Joint focal element: action focal set paired with the event set it may
// refer to. Theta carries the full action frame and any event.
struct JointFocal {
    FocalSet action;
    std::uint64_t events;
    double mass;
};

std::vector<JointFocal> joint_focals(const Evidence& e)
{
    std::vector<JointFocal> out;
    out.reserve(e.action_focals().size() + 1);
    for (const auto& [focal, mass] : e.action_focals())
        if (mass > 0.0) out.push_back({focal, e.event_bits(), mass});
    if (e.theta_mass() > 0.0)
        out.push_back({e.frame().full(), ~std::uint64_t{0}, e.theta_mass()});
    return out;
}

constexpr double kJointEnumerationLimit = 1e5;

double joint_conflict_by_enumeration(const std::vector<std::vector<JointFocal>>& items)
{
    double conflict = 0.0;
    auto recurse = [&](auto&& self, std::size_t depth, FocalSet action, std::uint64_t events,
                       double product) -> void {
        if (action.empty() || events == 0) {
            // a conflicting selection stays conflicting; sum the remaining mass
            double rest = product;
            for (std::size_t d = depth; d < items.size(); ++d) {
                double total = 0.0;
                for (const auto& f : items[d]) total += f.mass;
                rest *= total;
            }
            conflict += rest;
            return;
        }
        if (depth == items.size()) return;
        for (const auto& f : items[depth])
            self(self, depth + 1, action & f.action, events & f.events, product * f.mass);
    };
    recurse(recurse, 0, FocalSet::full(64), ~std::uint64_t{0}, 1.0);
    return conflict;
}

double joint_conflict_by_fold(const std::vector<std::vector<JointFocal>>& items)
{
    using Key = std::pair<std::uint64_t, std::uint64_t>;  // action bits, event bits
    std::map<Key, double> acc;
    for (const auto& f : items[0]) acc[{f.action.bits(), f.events}] += f.mass;
    double agreement = 1.0;
    for (std::size_t i = 1; i < items.size(); ++i) {
        std::map<Key, double> next;
        double step_conflict = 0.0;
        for (const auto& [key, ma] : acc) {
            for (const auto& f : items[i]) {
                std::uint64_t action = key.first & f.action.bits();
                std::uint64_t events = key.second & f.events;
                double p = ma * f.mass;
                if (action == 0 || events == 0)
                    step_conflict += p;
                else
                    next[{action, events}] += p;
            }
        }
        double remaining = 1.0 - step_conflict;
        if (remaining <= 0.0) return 1.0;
        for (auto& [key, m] : next) m /= remaining;
        acc = std::move(next);
        agreement *= remaining;
    }
    return 1.0 - agreement;
}

}  // namespace

double subset_conflict(std::span<const Evidence> subset)
{
    if (subset.size() < 2) return 0.0;
    std::vector<std::vector<JointFocal>> items;
    items.reserve(subset.size());
    double cross = 1.0;
    for (const auto& e : subset) {
        if (!(e.frame() == subset[0].frame()))
            throw FrameMismatchError("subset mixes evidence over different action frames");
        items.push_back(joint_focals(e));
        cross *= static_cast<double>(items.back().size());
    }
    // evaluation order is canonical: members sorted by id
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return subset[a].id() < subset[b].id(); });
    std::vector<std::vector<JointFocal>> ordered;
    ordered.reserve(items.size());
    for (std::size_t i : order) ordered.push_back(std::move(items[i]));

    if (cross <= kJointEnumerationLimit) return joint_conflict_by_enumeration(ordered);
    return joint_conflict_by_fold(ordered);
}

double domain_conflict(int r, const PriorCounts& prior)
{
    if (r < 1) throw std::invalid_argument("subset count must be at least 1");
    return std::clamp(1.0 - prior.mass(r), 0.0, 1.0);
}

double metaconflict_value(double c0, std::span<const double> subset_conflicts)
{
    std::vector<double> factors;
    factors.reserve(subset_conflicts.size() + 1);
    factors.push_back(1.0 - c0);
    for (double c : subset_conflicts) factors.push_back(1.0 - c);
    std::sort(factors.begin(), factors.end(), std::greater<>());
    double plausibility = 1.0;
    for (double f : factors) plausibility *= f;
    return 1.0 - plausibility;
}

MetaconflictAssessment metaconflict(const Partition& p)
{
    MetaconflictAssessment out;
    out.domain_conflict = domain_conflict(static_cast<int>(p.subset_count()), p.prior());
    out.subset_conflicts.reserve(p.subset_count());
    for (std::size_t i = 0; i < p.subset_count(); ++i) {
        std::vector<Evidence> members = p.subset_members(i);
        out.subset_conflicts.push_back(subset_conflict(members));
    }
    out.metaconflict = metaconflict_value(out.domain_conflict, out.subset_conflicts);
    out.partition_plausibility = 1.0 - out.metaconflict;
    return out;
}

}  // namespace evclust
