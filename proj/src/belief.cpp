#include "evclust/belief.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace evclust {

namespace {

void require_same_frame(const Frame& a, const Frame& b)
{
    if (!(a == b)) throw FrameMismatchError("mass functions are defined over different frames");
}

}  // namespace

std::size_t FocalSet::count() const
{
    return static_cast<std::size_t>(std::popcount(bits_));
}

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels))
{
    if (labels_.empty()) throw std::invalid_argument("frame needs at least one hypothesis");
    if (labels_.size() > kMaxSize) throw std::invalid_argument("frame exceeds 64 hypotheses");
    std::set<std::string_view> seen;
    for (const auto& l : labels_) {
        if (l.empty()) throw std::invalid_argument("empty hypothesis label");
        if (!seen.insert(l).second) throw std::invalid_argument("duplicate hypothesis label: " + l);
    }
}

std::size_t Frame::index_of(std::string_view label) const
{
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return i;
    throw std::invalid_argument("unknown hypothesis label: " + std::string(label));
}

MassFunction::MassFunction(Frame frame, std::map<FocalSet, double> masses)
    : frame_(std::move(frame)), masses_(std::move(masses))
{
    double total = 0.0;
    for (auto it = masses_.begin(); it != masses_.end();) {
        const auto& [focal, m] = *it;
        if (focal.empty()) throw std::invalid_argument("mass assigned to the empty set");
        if (!focal.subset_of(frame_.full()))
            throw std::invalid_argument("focal set contains hypotheses outside the frame");
        if (m < -kMassTolerance || m > 1.0 + kMassTolerance)
            throw std::invalid_argument("mass outside [0,1]");
        total += m;
        if (m == 0.0)
            it = masses_.erase(it);
        else
            ++it;
    }
    if (std::abs(total - 1.0) > kMassTolerance)
        throw std::invalid_argument("masses do not sum to 1");
}

MassFunction MassFunction::vacuous(Frame frame)
{
    std::map<FocalSet, double> m{{frame.full(), 1.0}};
    return MassFunction(std::move(frame), std::move(m));
}

MassFunction MassFunction::simple_support(Frame frame, FocalSet focal, double mass)
{
    std::map<FocalSet, double> m;
    m[focal] += mass;
    m[frame.full()] += 1.0 - mass;
    return MassFunction(std::move(frame), std::move(m));
}

double MassFunction::mass(FocalSet a) const
{
    auto it = masses_.find(a);
    return it == masses_.end() ? 0.0 : it->second;
}

CombineOutcome combine(const MassFunction& a, const MassFunction& b)
{
    require_same_frame(a.frame(), b.frame());
    std::map<FocalSet, double> products;
    double conflict = 0.0;
    for (const auto& [fa, ma] : a.masses()) {
        for (const auto& [fb, mb] : b.masses()) {
            FocalSet inter = fa & fb;
            double p = ma * mb;
            if (inter.empty())
                conflict += p;
            else
                products[inter] += p;
        }
    }
    double remaining = 1.0 - conflict;
    if (remaining <= kMassTolerance)
        throw TotalConflictError("combination is totally conflicting");
    for (auto& [focal, m] : products) m /= remaining;
    return CombineOutcome{MassFunction(a.frame(), std::move(products)), conflict};
}

namespace {

// Focal cross-products beyond this size go through the sequential fold.
constexpr double kEnumerationLimit = 1e6;

double conflict_by_enumeration(std::span<const MassFunction> items)
{
    double conflict = 0.0;
    FocalSet all = items[0].frame().full();
    // depth-first over one focal pick per item, carrying the running
    // intersection and mass product
    auto recurse = [&](auto&& self, std::size_t depth, FocalSet inter, double product) -> void {
        if (depth == items.size()) {
            if (inter.empty()) conflict += product;
            return;
        }
        for (const auto& [focal, m] : items[depth].masses())
            self(self, depth + 1, inter & focal, product * m);
    };
    recurse(recurse, 0, all, 1.0);
    return conflict;
}

double conflict_by_fold(std::span<const MassFunction> items)
{
    // 1 - prod(1 - k_step) over pairwise combinations equals the batch
    // conflict; a totally conflicting step pins the result at 1
    std::map<FocalSet, double> acc(items[0].masses());
    double agreement = 1.0;
    for (std::size_t i = 1; i < items.size(); ++i) {
        std::map<FocalSet, double> next;
        double step_conflict = 0.0;
        for (const auto& [fa, ma] : acc) {
            for (const auto& [fb, mb] : items[i].masses()) {
                FocalSet inter = fa & fb;
                double p = ma * mb;
                if (inter.empty())
                    step_conflict += p;
                else
                    next[inter] += p;
            }
        }
        double remaining = 1.0 - step_conflict;
        if (remaining <= 0.0) return 1.0;
        for (auto& [focal, m] : next) m /= remaining;
        acc = std::move(next);
        agreement *= remaining;
    }
    return 1.0 - agreement;
}

}  // namespace

double conflict_of(std::span<const MassFunction> items)
{
    if (items.size() < 2) return 0.0;
    double cross = 1.0;
    for (const auto& m : items) {
        require_same_frame(items[0].frame(), m.frame());
        cross *= static_cast<double>(m.masses().size());
    }
    if (cross <= kEnumerationLimit) return conflict_by_enumeration(items);
    return conflict_by_fold(items);
}

MassFunction discount(const MassFunction& m, double alpha)
{
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("discount factor outside [0,1]");
    FocalSet theta = m.frame().full();
    std::map<FocalSet, double> out;
    double theta_mass = 1.0 - alpha;
    for (const auto& [focal, mass] : m.masses()) {
        if (focal == theta)
            theta_mass += alpha * mass;
        else
            out[focal] = alpha * mass;
    }
    if (theta_mass > 0.0) out[theta] = theta_mass;
    return MassFunction(m.frame(), std::move(out));
}

double belief(const MassFunction& m, FocalSet a)
{
    double total = 0.0;
    for (const auto& [focal, mass] : m.masses())
        if (focal.subset_of(a)) total += mass;
    return total;
}

double plausibility(const MassFunction& m, FocalSet a)
{
    double total = 0.0;
    for (const auto& [focal, mass] : m.masses())
        if (!(focal & a).empty()) total += mass;
    return total;
}

}  // namespace evclust
