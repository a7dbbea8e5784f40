#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evclust/belief.hpp"

namespace evclust {

/// One focal element of an evidence action part.
struct WeightedFocal {
    FocalSet action;
    double mass;
};

/// A proposition about one of several possible events: an action part (a bpa
/// over the action frame, theta residual implicit) plus a crisp event part
/// saying which events the proposition may refer to.
class Evidence {
public:
    Evidence(std::string id, Frame action_frame, std::vector<WeightedFocal> action,
             std::uint64_t event_bits);

    const std::string& id() const { return id_; }
    const Frame& frame() const { return frame_; }
    const std::vector<WeightedFocal>& action_focals() const { return action_; }
    double theta_mass() const { return theta_mass_; }
    std::uint64_t event_bits() const { return event_bits_; }

    /// The action part as a full mass function (explicit theta residual).
    MassFunction action_bpa() const;

private:
    std::string id_;
    Frame frame_;
    std::vector<WeightedFocal> action_;
    double theta_mass_;
    std::uint64_t event_bits_;
};

/// Prior probability distribution over the number of events.
class PriorCounts {
public:
    explicit PriorCounts(std::map<int, double> masses);

    double mass(int count) const;
    const std::map<int, double>& masses() const { return masses_; }
    int max_support() const;

private:
    std::map<int, double> masses_;
};

/// Assignment of all evidence to disjoint non-empty subsets, plus the prior
/// over event counts. Subset members are kept sorted by evidence id so that
/// conflict evaluation is independent of construction history.
class Partition {
public:
    Partition(std::vector<Evidence> evidence, std::vector<std::vector<std::size_t>> subsets,
              PriorCounts prior);

    std::size_t subset_count() const { return subsets_.size(); }
    std::span<const std::size_t> subset(std::size_t i) const { return subsets_.at(i); }
    const std::vector<std::vector<std::size_t>>& subsets() const { return subsets_; }
    const std::vector<Evidence>& evidence() const { return evidence_; }
    const Evidence& evidence_at(std::size_t i) const { return evidence_.at(i); }
    std::size_t subset_of(std::size_t evidence_index) const;
    std::optional<std::size_t> find_evidence(std::string_view id) const;
    const PriorCounts& prior() const { return prior_; }

    /// Members of subset i materialized as Evidence values.
    std::vector<Evidence> subset_members(std::size_t i) const;

private:
    std::vector<Evidence> evidence_;
    std::vector<std::vector<std::size_t>> subsets_;
    PriorCounts prior_;
};

struct MetaconflictAssessment {
    double domain_conflict;               // c_0
    std::vector<double> subset_conflicts; // c_i per subset, in subset order
    double metaconflict;                  // 1 - (1-c_0) * prod(1-c_i)
    double partition_plausibility;        // 1 - metaconflict
};

/// Conflict of combining the joint propositions of a subset: a focal selection
/// conflicts iff the action intersection or the event intersection is empty.
double subset_conflict(std::span<const Evidence> subset);

/// Conflict between assuming r subsets and the prior: 1 - m(E_r).
double domain_conflict(int r, const PriorCounts& prior);

MetaconflictAssessment metaconflict(const Partition& p);

/// The criterion value from already-known component conflicts, folded in a
/// canonical order so equal conflict multisets give bit-identical results.
double metaconflict_value(double c0, std::span<const double> subset_conflicts);

}  // namespace evclust
