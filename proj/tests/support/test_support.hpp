#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evclust/evidence.hpp"

namespace test_support {

// Cross-product conflict oracle: odometer over one focal pick per function,
// independent of the library's recursive/fold paths.
inline double oracle_conflict(const std::vector<evclust::MassFunction>& items)
{
    if (items.size() < 2) return 0.0;
    std::vector<std::vector<std::pair<evclust::FocalSet, double>>> focals;
    for (const auto& m : items)
        focals.emplace_back(m.masses().begin(), m.masses().end());
    std::vector<std::size_t> pick(items.size(), 0);
    double conflict = 0.0;
    while (true) {
        evclust::FocalSet inter = items[0].frame().full();
        double product = 1.0;
        for (std::size_t i = 0; i < pick.size(); ++i) {
            inter = inter & focals[i][pick[i]].first;
            product *= focals[i][pick[i]].second;
        }
        if (inter.empty()) conflict += product;
        std::size_t d = 0;
        while (d < pick.size() && ++pick[d] == focals[d].size()) pick[d++] = 0;
        if (d == pick.size()) break;
    }
    return conflict;
}

// Same odometer over joint (action, events) focal elements of evidence items.
inline double oracle_joint_conflict(const std::vector<evclust::Evidence>& items)
{
    if (items.size() < 2) return 0.0;
    struct Pick {
        evclust::FocalSet action;
        std::uint64_t events;
        double mass;
    };
    std::vector<std::vector<Pick>> focals;
    for (const auto& e : items) {
        std::vector<Pick> list;
        for (const auto& [focal, mass] : e.action_focals())
            if (mass > 0.0) list.push_back({focal, e.event_bits(), mass});
        if (e.theta_mass() > 0.0)
            list.push_back({e.frame().full(), ~std::uint64_t{0}, e.theta_mass()});
        focals.push_back(std::move(list));
    }
    std::vector<std::size_t> pick(items.size(), 0);
    double conflict = 0.0;
    while (true) {
        evclust::FocalSet action = items[0].frame().full();
        std::uint64_t events = ~std::uint64_t{0};
        double product = 1.0;
        for (std::size_t i = 0; i < pick.size(); ++i) {
            action = action & focals[i][pick[i]].action;
            events &= focals[i][pick[i]].events;
            product *= focals[i][pick[i]].mass;
        }
        if (action.empty() || events == 0) conflict += product;
        std::size_t d = 0;
        while (d < pick.size() && ++pick[d] == focals[d].size()) pick[d++] = 0;
        if (d == pick.size()) break;
    }
    return conflict;
}

inline std::size_t draw_below(std::mt19937_64& rng, std::size_t bound)
{
    return static_cast<std::size_t>(rng() % bound);
}

inline double draw_unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline evclust::FocalSet random_focal(std::mt19937_64& rng, std::size_t frame_size)
{
    std::uint64_t limit = (std::uint64_t{1} << frame_size) - 1;
    std::uint64_t bits = 1 + rng() % limit;  // never empty
    return evclust::FocalSet::from_bits(bits);
}

inline evclust::MassFunction random_mass_function(std::mt19937_64& rng,
                                                  const evclust::Frame& frame,
                                                  std::size_t max_focals = 3)
{
    std::map<evclust::FocalSet, double> weights;
    std::size_t count = 1 + draw_below(rng, max_focals);
    for (std::size_t i = 0; i < count; ++i)
        weights[random_focal(rng, frame.size())] += 0.05 + draw_unit(rng);
    weights[frame.full()] += 0.05 + draw_unit(rng);
    double total = 0.0;
    for (const auto& [focal, w] : weights) total += w;
    for (auto& [focal, w] : weights) w /= total;
    return evclust::MassFunction(frame, std::move(weights));
}

inline evclust::Evidence random_evidence(std::mt19937_64& rng, const evclust::Frame& frame,
                                         std::string id, std::size_t event_count)
{
    std::size_t focal_count = 1 + draw_below(rng, 2);
    double budget = 0.2 + 0.75 * draw_unit(rng);
    std::vector<evclust::WeightedFocal> focals;
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t i = 0; i < focal_count; ++i) {
        weights.push_back(0.1 + draw_unit(rng));
        total += weights.back();
    }
    for (std::size_t i = 0; i < focal_count; ++i)
        focals.push_back({random_focal(rng, frame.size()), budget * weights[i] / total});
    std::uint64_t events = 1 + rng() % ((std::uint64_t{1} << event_count) - 1);
    return evclust::Evidence(std::move(id), frame, std::move(focals), events);
}

inline evclust::PriorCounts random_prior(std::mt19937_64& rng, int max_count)
{
    std::map<int, double> masses;
    double total = 0.0;
    for (int c = 1; c <= max_count; ++c) {
        double w = draw_below(rng, 4) == 0 ? 0.0 : 0.05 + draw_unit(rng);
        masses[c] = w;
        total += w;
    }
    if (total == 0.0) {
        masses[1] = 1.0;
        total = 1.0;
    }
    for (auto& [c, w] : masses) w /= total;
    return evclust::PriorCounts(std::move(masses));
}

inline std::vector<evclust::Evidence> random_evidence_set(std::mt19937_64& rng,
                                                          const evclust::Frame& frame,
                                                          std::size_t count,
                                                          std::size_t event_count)
{
    std::vector<evclust::Evidence> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_evidence(rng, frame, "e" + std::to_string(i + 1), event_count));
    return out;
}

// Random valid partition of the evidence into 1..n non-empty blocks.
inline evclust::Partition random_partition(std::mt19937_64& rng,
                                           std::vector<evclust::Evidence> evidence,
                                           const evclust::PriorCounts& prior)
{
    std::size_t n = evidence.size();
    std::size_t blocks = 1 + draw_below(rng, n);
    std::vector<std::vector<std::size_t>> assignment(blocks);
    for (std::size_t i = 0; i < blocks; ++i) assignment[i].push_back(i);
    for (std::size_t i = blocks; i < n; ++i)
        assignment[draw_below(rng, blocks)].push_back(i);
    return evclust::Partition(std::move(evidence), std::move(assignment), prior);
}

// Enumerates all set partitions as restricted growth strings.
template <typename Visit>
void for_each_partition(std::size_t n, Visit visit)
{
    std::vector<int> labels(n, 0);
    while (true) {
        int blocks = 0;
        for (int l : labels) blocks = std::max(blocks, l + 1);
        visit(labels, blocks);
        std::size_t i = n;
        while (i-- > 1) {
            int prefix_max = 0;
            for (std::size_t k = 0; k < i; ++k) prefix_max = std::max(prefix_max, labels[k]);
            if (labels[i] <= prefix_max) break;
        }
        if (i == 0) break;
        ++labels[i];
        std::fill(labels.begin() + i + 1, labels.end(), 0);
    }
}

}  // namespace test_support
