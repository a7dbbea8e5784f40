#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evclust {

// Absolute tolerance for mass-function normalization checks.
inline constexpr double kMassTolerance = 1e-9;

struct FrameMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Combination ran into conflict 1: every joint focal intersection is empty.
struct TotalConflictError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Set of hypothesis indices into a Frame, packed into 64 bits.
class FocalSet {
public:
    constexpr FocalSet() = default;

    static constexpr FocalSet from_bits(std::uint64_t bits) { return FocalSet(bits); }

    static FocalSet of(std::initializer_list<std::size_t> indices)
    {
        std::uint64_t bits = 0;
        for (std::size_t i : indices) {
            if (i >= 64) throw std::invalid_argument("hypothesis index out of range");
            bits |= std::uint64_t{1} << i;
        }
        return FocalSet(bits);
    }

    static constexpr FocalSet full(std::size_t n)
    {
        return FocalSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
    }

    constexpr bool empty() const { return bits_ == 0; }
    std::size_t count() const;
    constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1; }
    constexpr std::uint64_t bits() const { return bits_; }

    constexpr FocalSet operator&(FocalSet o) const { return FocalSet(bits_ & o.bits_); }
    constexpr FocalSet operator|(FocalSet o) const { return FocalSet(bits_ | o.bits_); }
    constexpr bool subset_of(FocalSet o) const { return (bits_ & ~o.bits_) == 0; }

    friend constexpr bool operator==(FocalSet, FocalSet) = default;
    friend constexpr auto operator<=>(FocalSet a, FocalSet b) { return a.bits_ <=> b.bits_; }

private:
    constexpr explicit FocalSet(std::uint64_t bits) : bits_(bits) {}
    std::uint64_t bits_ = 0;
};

/// Frame of discernment: a fixed, ordered list of mutually exclusive hypotheses.
class Frame {
public:
    static constexpr std::size_t kMaxSize = 64;

    explicit Frame(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::size_t index_of(std::string_view label) const;
    FocalSet full() const { return FocalSet::full(labels_.size()); }

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::vector<std::string> labels_;
};

/// Basic probability assignment: masses over non-empty focal sets, summing to 1.
class MassFunction {
public:
    MassFunction(Frame frame, std::map<FocalSet, double> masses);

    static MassFunction vacuous(Frame frame);
    static MassFunction simple_support(Frame frame, FocalSet focal, double mass);

    const Frame& frame() const { return frame_; }
    const std::map<FocalSet, double>& masses() const { return masses_; }
    double mass(FocalSet a) const;
    double theta_mass() const { return mass(frame_.full()); }

private:
    Frame frame_;
    std::map<FocalSet, double> masses_;
};

struct CombineOutcome {
    MassFunction mass;
    double conflict;  // product mass on empty intersections, in [0,1)
};

/// Dempster's rule for two mass functions over the same frame.
/// Throws TotalConflictError when the conflict reaches 1.
CombineOutcome combine(const MassFunction& a, const MassFunction& b);

/// Total conflict of combining a whole collection: the product mass falling
/// on empty intersections over the full focal cross-product. 0 for empty or
/// singleton collections; may legally equal 1.
double conflict_of(std::span<const MassFunction> items);

/// Scale all non-theta masses by alpha and move the remainder to theta.
MassFunction discount(const MassFunction& m, double alpha);

double belief(const MassFunction& m, FocalSet a);
double plausibility(const MassFunction& m, FocalSet a);

}  // namespace evclust
