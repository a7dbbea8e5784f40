#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "evclust/search.hpp"
#include "support/test_support.hpp"

using namespace evclust;

namespace {

Frame hair_frame()
{
    return Frame({"brown_employee", "brown_nonemployee", "red"});
}

std::vector<Evidence> burglary_evidence()
{
    Frame f = hair_frame();
    return {
        Evidence("e1", f, {{FocalSet::of({1}), 0.8}}, 0b01),
        Evidence("e2", f, {{FocalSet::of({0}), 0.7}}, 0b11),
        Evidence("e3", f, {{FocalSet::of({2}), 0.6}}, 0b10),
        Evidence("e4", f, {{FocalSet::of({0, 1}), 0.5}}, 0b11),
    };
}

PriorCounts burglary_prior()
{
    return PriorCounts({{1, 0.6}, {2, 0.4}});
}

std::set<std::set<std::string>> id_blocks(const Partition& p)
{
    std::set<std::set<std::string>> out;
    for (std::size_t i = 0; i < p.subset_count(); ++i) {
        std::set<std::string> block;
        for (std::size_t idx : p.subset(i)) block.insert(p.evidence_at(idx).id());
        out.insert(std::move(block));
    }
    return out;
}

std::vector<std::string> subset_ids(const Partition& p, std::size_t i)
{
    std::vector<std::string> out;
    for (std::size_t idx : p.subset(i)) out.push_back(p.evidence_at(idx).id());
    return out;
}

}  // namespace

TEST_CASE("exhaustive search finds the burglary optimum")
{
    auto result = exhaustive_minimize(burglary_evidence(), burglary_prior());
    CHECK(result.best.subset_count() == 2);
    CHECK(id_blocks(result.best) ==
          std::set<std::set<std::string>>{{"e2", "e3"}, {"e1", "e4"}});
    CHECK(result.assessment.metaconflict == doctest::Approx(0.768).epsilon(1e-12));
    // canonical order: subsets sorted by their smallest evidence id
    CHECK(subset_ids(result.best, 0) == std::vector<std::string>{"e1", "e4"});
    CHECK(result.explored_counts.at(2) == CountVerdict::kBest);
    CHECK(result.explored_counts.at(3) == CountVerdict::kPrunedDomainBound);
    CHECK(result.explored_counts.at(4) == CountVerdict::kPrunedDomainBound);
}

TEST_CASE("exhaustive search trivial instances")
{
    Frame f = hair_frame();
    PriorCounts prior = burglary_prior();
    std::vector<Evidence> one{Evidence("e1", f, {{FocalSet::of({0}), 0.7}}, 1)};
    auto single = exhaustive_minimize(one, prior);
    CHECK(single.best.subset_count() == 1);
    CHECK(single.assessment.metaconflict == doctest::Approx(0.4).epsilon(1e-12));

    std::vector<Evidence> same{Evidence("e1", f, {{FocalSet::of({0, 1}), 0.5}}, 1),
                               Evidence("e2", f, {{FocalSet::of({0, 1}), 0.5}}, 1)};
    auto both = exhaustive_minimize(same, PriorCounts({{1, 1.0}}));
    CHECK(both.best.subset_count() == 1);
    CHECK(both.assessment.metaconflict == doctest::Approx(0.0));
}

TEST_CASE("exhaustive search refuses oversized instances")
{
    std::mt19937_64 rng(5);
    Frame f({"a", "b"});
    auto evidence = test_support::random_evidence_set(rng, f, 5, 2);
    SearchConfig config;
    config.max_exhaustive_n = 4;
    CHECK_THROWS_AS(exhaustive_minimize(evidence, test_support::random_prior(rng, 2), config),
                    std::invalid_argument);
}

TEST_CASE("hill climbing from the single-subset start reproduces the optimum")
{
    SearchConfig config;
    config.restarts = 1;  // only the all-in-one start
    auto local = local_minimize(burglary_evidence(), burglary_prior(), config);
    auto exhaustive = exhaustive_minimize(burglary_evidence(), burglary_prior());
    CHECK(local.assessment.metaconflict == exhaustive.assessment.metaconflict);
    CHECK(id_blocks(local.best) == id_blocks(exhaustive.best));
    // trajectory order: the original subset keeps the items that never moved
    CHECK(subset_ids(local.best, 0) == std::vector<std::string>{"e2", "e3"});
    CHECK(subset_ids(local.best, 1) == std::vector<std::string>{"e1", "e4"});
    // one improving move per step, criterion strictly decreasing
    REQUIRE(local.trace.size() == 3);
    CHECK(local.trace.front() == doctest::Approx(0.8836).epsilon(1e-12));
    CHECK(local.trace.back() == doctest::Approx(0.768).epsilon(1e-12));
}

TEST_CASE("hill climbing stops immediately at a fixed point")
{
    Frame f = hair_frame();
    std::vector<Evidence> same{Evidence("e1", f, {{FocalSet::of({0, 1}), 0.5}}, 1),
                               Evidence("e2", f, {{FocalSet::of({0, 1}), 0.5}}, 1)};
    SearchConfig config;
    config.restarts = 1;
    auto result = local_minimize(same, PriorCounts({{1, 1.0}}), config);
    CHECK(result.trace.size() == 1);  // the start was already minimal
    CHECK(result.assessment.metaconflict == doctest::Approx(0.0));
}

TEST_CASE("hill climbing matches the exhaustive optimum on random instances")
{
    std::mt19937_64 rng(43);
    Frame f({"a", "b", "c", "d"});
    for (int i = 0; i < 25; ++i) {
        std::size_t n = 2 + test_support::draw_below(rng, 7);
        auto evidence = test_support::random_evidence_set(rng, f, n, 3);
        PriorCounts prior = test_support::random_prior(rng, 3);
        SearchConfig config;
        config.rng_seed = rng();
        config.restarts = 8;
        auto local = local_minimize(evidence, prior, config);
        auto exhaustive = exhaustive_minimize(evidence, prior);
        CHECK(local.assessment.metaconflict == exhaustive.assessment.metaconflict);
    }
}

TEST_CASE("search results validate against recomputation")
{
    std::mt19937_64 rng(47);
    Frame f({"a", "b", "c"});
    for (int i = 0; i < 20; ++i) {
        auto evidence = test_support::random_evidence_set(rng, f, 5, 3);
        PriorCounts prior = test_support::random_prior(rng, 3);
        auto result = local_minimize(evidence, prior);
        auto again = metaconflict(result.best);
        CHECK(result.assessment.metaconflict ==
              doctest::Approx(again.metaconflict).epsilon(1e-12));
        CHECK(result.assessment.domain_conflict == again.domain_conflict);
    }
}

TEST_CASE("fixed seeds give identical results")
{
    std::mt19937_64 rng(53);
    Frame f({"a", "b", "c", "d"});
    auto evidence = test_support::random_evidence_set(rng, f, 7, 3);
    PriorCounts prior = test_support::random_prior(rng, 3);
    SearchConfig config;
    config.rng_seed = 99;
    auto first = local_minimize(evidence, prior, config);
    auto second = local_minimize(evidence, prior, config);
    CHECK(first.assessment.metaconflict == second.assessment.metaconflict);
    CHECK(first.best.subsets() == second.best.subsets());
    CHECK(first.trace == second.trace);
    CHECK(first.explored_counts == second.explored_counts);
}

TEST_CASE("count pruning")
{
    std::set<int> candidates{1, 2, 3, 4, 5, 6};

    // a bound of 1 - m(E_j) rules out every count the prior barely supports
    PriorCounts prior = burglary_prior();
    auto survivors = prune_counts(prior, 0.768, 2, candidates);
    CHECK(survivors == std::set<int>{1, 2});

    // prior dominance: fewer subsets with less prior mass lose outright
    PriorCounts tilted({{1, 0.4}, {2, 0.6}});
    auto pruned = prune_counts(tilted, 0.7, 2, std::set<int>{1, 2});
    CHECK(pruned == std::set<int>{2});

    // a perfect score at the current count rules out all other counts
    PriorCounts uniform({{1, 0.2}, {2, 0.2}, {3, 0.2}, {4, 0.2}, {5, 0.2}});
    auto only = prune_counts(uniform, 0.0, 3, std::set<int>{1, 2, 3, 4, 5});
    CHECK(only == std::set<int>{3});
}

TEST_CASE("pruned counts never hide a better partition")
{
    std::mt19937_64 rng(59);
    Frame f({"a", "b", "c"});
    for (int i = 0; i < 20; ++i) {
        std::size_t n = 3 + test_support::draw_below(rng, 4);
        auto evidence = test_support::random_evidence_set(rng, f, n, 3);
        PriorCounts prior = test_support::random_prior(rng, 3);
        auto result = exhaustive_minimize(evidence, prior);

        std::set<int> candidates;
        for (int c = 1; c <= static_cast<int>(n); ++c) candidates.insert(c);
        auto survivors = prune_counts(prior, result.assessment.metaconflict,
                                      static_cast<int>(result.best.subset_count()), candidates);

        // per-count minima by full enumeration
        std::map<int, double> best_by_count;
        test_support::for_each_partition(n, [&](const std::vector<int>& labels, int blocks) {
            std::vector<std::vector<std::size_t>> subsets(blocks);
            for (std::size_t q = 0; q < labels.size(); ++q) subsets[labels[q]].push_back(q);
            Partition p(evidence, std::move(subsets), prior);
            double mcf = metaconflict(p).metaconflict;
            auto [it, fresh] = best_by_count.try_emplace(blocks, mcf);
            if (!fresh) it->second = std::min(it->second, mcf);
        });
        for (int c : candidates) {
            if (survivors.count(c)) continue;
            CHECK(best_by_count.at(c) >= result.assessment.metaconflict - 1e-12);
        }
    }
}
