#include "evclust/pipeline.hpp"

#include <bit>
#include <cstdio>
#include <sstream>

namespace evclust {

namespace {

template <typename F>
auto stage(const char* name, F&& body)
{
    try {
        return body();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(name) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(name) + ": " + e.what());
    } catch (const TotalConflictError& e) {
        throw TotalConflictError(std::string(name) + ": " + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

std::string fixed(double value, int digits = 4)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

const char* verdict_name(CountVerdict v)
{
    switch (v) {
        case CountVerdict::kBest: return "best";
        case CountVerdict::kExplored: return "explored";
        case CountVerdict::kPrunedDomainBound: return "pruned (domain bound)";
        case CountVerdict::kPrunedPriorDominance: return "pruned (prior dominance)";
    }
    return "?";
}

const char* verdict_key(CountVerdict v)
{
    switch (v) {
        case CountVerdict::kBest: return "best";
        case CountVerdict::kExplored: return "explored";
        case CountVerdict::kPrunedDomainBound: return "pruned-domain-bound";
        case CountVerdict::kPrunedPriorDominance: return "pruned-prior-dominance";
    }
    return "?";
}

std::string focal_labels(const Frame& frame, FocalSet focal)
{
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (!focal.contains(i)) continue;
        if (!first) out += ", ";
        out += frame.label(i);
        first = false;
    }
    return out + "}";
}

nlohmann::ordered_json mass_function_json(const MassFunction& m)
{
    nlohmann::ordered_json out;
    nlohmann::ordered_json focals = nlohmann::ordered_json::array();
    FocalSet theta = m.frame().full();
    for (const auto& [focal, mass] : m.masses()) {
        if (focal == theta) continue;
        nlohmann::ordered_json entry;
        auto over = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < m.frame().size(); ++i)
            if (focal.contains(i)) over.push_back(m.frame().label(i));
        entry["over"] = std::move(over);
        entry["mass"] = mass;
        focals.push_back(std::move(entry));
    }
    out["focals"] = std::move(focals);
    out["theta"] = m.theta_mass();
    return out;
}

std::vector<int> mask_to_indices(std::uint64_t mask)
{
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if (mask & (std::uint64_t{1} << i)) out.push_back(i + 1);
    return out;
}

}  // namespace

Report run_pipeline(const Scenario& s, PipelineStage upto)
{
    SearchResult search = stage("partition-search", [&] {
        if (s.evidence.size() <= s.config.max_exhaustive_n)
            return exhaustive_minimize(s.evidence, s.prior, s.config);
        return local_minimize(s.evidence, s.prior, s.config);
    });
    const bool exhaustive = s.evidence.size() <= s.config.max_exhaustive_n;

    Report report{1,
                  s.config.rng_seed,
                  exhaustive ? "exhaustive" : "local-search",
                  std::move(search.best),
                  std::move(search.assessment),
                  std::move(search.explored_counts),
                  std::move(search.trace),
                  {},
                  {},
                  {},
                  std::nullopt,
                  std::nullopt,
                  {}};
    if (upto == PipelineStage::kPartition) return report;

    report.specification = stage("evidence-specification", [&] {
        return specify_all(report.partition);
    });
    for (const auto& spec : report.specification) {
        for (const auto& note : spec.membership.notes)
            report.diagnostics.push_back(spec.evidence_id + ": " + note);
        if (spec.falsity >= 1.0 - kMassTolerance)
            report.diagnostics.push_back(spec.evidence_id + ": certainly false, fully discounted");
    }
    if (upto == PipelineStage::kSpecify) return report;

    stage("posterior-domain", [&] {
        report.existence = subset_existences(report.partition, report.specification);
        report.existence_combination = combine_existence(report.existence);
        report.counts = count_bpa(report.existence_combination);
        report.posterior_distribution = posterior(report.partition.prior(), *report.counts);
        return 0;
    });
    return report;
}

namespace {

void render_partition_human(const Report& r, std::ostringstream& out)
{
    const auto& a = r.assessment;
    out << "partition  r = " << r.partition.subset_count() << "  Mcf = " << fixed(a.metaconflict)
        << "  Pls(partition) = " << fixed(a.partition_plausibility) << "\n";
    out << "  c_0 = " << fixed(a.domain_conflict) << "\n";
    for (std::size_t i = 0; i < r.partition.subset_count(); ++i) {
        out << "  chi_" << i + 1 << " = {";
        bool first = true;
        for (std::size_t idx : r.partition.subset(i)) {
            if (!first) out << ", ";
            out << r.partition.evidence_at(idx).id();
            first = false;
        }
        out << "}  c_" << i + 1 << " = " << fixed(a.subset_conflicts[i]) << "\n";
    }
    out << "  counts:";
    for (const auto& [count, verdict] : r.count_verdicts)
        out << "  r=" << count << " " << verdict_name(verdict);
    out << "\n";
    if (!r.trace.empty()) {
        out << "  trace:";
        for (double v : r.trace) out << " " << fixed(v);
        out << "\n";
    }
}

void render_specification_human(const Report& r, std::ostringstream& out)
{
    const Frame& frame = r.partition.evidence().front().frame();
    out << "\nmembership and credibility\n";
    for (const auto& spec : r.specification) {
        out << "  " << spec.evidence_id << "  in chi_" << spec.home + 1
            << "  falsity k = " << fixed(spec.falsity) << "\n";
        for (const auto& [slot, mass] : spec.membership.not_in) {
            out << "    m(" << spec.evidence_id << " not in chi_" << slot + 1 << ") = "
                << fixed(mass);
            if (spec.membership.has_new_slot && slot + 1 == spec.membership.slot_count)
                out << "  (prospective new subset)";
            out << "\n";
        }
        if (spec.membership.in_own)
            out << "    m(" << spec.evidence_id << " in chi_" << spec.home + 1 << ") = "
                << fixed(*spec.membership.in_own) << "\n";
        for (std::size_t j = 0; j < spec.credibility.size(); ++j) {
            out << "    Pls(" << spec.evidence_id << " in chi_" << j + 1 << ") = "
                << fixed(spec.beliefs.plausibility[j]);
            if (spec.beliefs.belief[j] > 0.0)
                out << "  Bel = " << fixed(spec.beliefs.belief[j]);
            out << "  alpha_" << j + 1 << " = " << fixed(spec.credibility[j]) << "\n";
        }
        FocalSet theta = frame.full();
        for (const auto& [focal, mass] : spec.discounted_for_falsity.masses()) {
            if (focal == theta) continue;
            out << "    m%" << focal_labels(frame, focal) << " = " << fixed(mass);
            for (std::size_t j = 0; j < spec.discounted_per_subset.size(); ++j)
                out << "  m%%" << j + 1 << " = " << fixed(spec.discounted_per_subset[j].mass(focal));
            out << "\n";
        }
    }
}

void render_posterior_human(const Report& r, std::ostringstream& out)
{
    out << "\nsubset existence\n";
    for (const auto& e : r.existence) {
        out << "  chi_" << e.subset + 1 << ": m(exists) = " << fixed(e.mass_exists)
            << "  m(Theta) = " << fixed(e.mass_theta)
            << "  combination conflict = " << fixed(e.combination_conflict) << "\n"
            << "    emptiness credibility alpha_" << e.subset + 1 << " = "
            << fixed(e.emptiness_credibility) << "  discounted " << fixed(e.discounted_exists)
            << " / " << fixed(e.discounted_theta) << "\n";
    }
    out << "\nsupported conjunctions\n";
    for (const auto& [mask, mass] : r.existence_combination) {
        if (mask == 0) {
            out << "  Theta = " << fixed(mass) << "\n";
            continue;
        }
        out << "  ";
        bool first = true;
        for (int i : mask_to_indices(mask)) {
            if (!first) out << " and ";
            out << "chi_" << i;
            first = false;
        }
        out << " = " << fixed(mass) << "\n";
    }
    out << "\ncount support\n";
    for (auto it = r.counts->at_least.rbegin(); it != r.counts->at_least.rend(); ++it)
        out << "  m(|chi| >= " << it->first << ") = " << fixed(it->second) << "\n";
    out << "  m(Theta) = " << fixed(r.counts->theta) << "\n";
    out << "\nposterior over the number of events\n";
    out << "  conflict k = " << fixed(r.posterior_distribution->conflict) << "\n";
    for (const auto& [count, mass] : r.posterior_distribution->masses)
        out << "  m*(E_" << count << ") = " << fixed(mass) << "\n";
}

std::string render_human(const Report& r)
{
    std::ostringstream out;
    out << "evidence: " << r.partition.evidence().size() << " items, algorithm: " << r.algorithm
        << ", seed: " << r.seed << "\n\n";
    render_partition_human(r, out);
    if (!r.specification.empty()) render_specification_human(r, out);
    if (r.posterior_distribution) render_posterior_human(r, out);
    if (!r.diagnostics.empty()) {
        out << "\nwarnings\n";
        for (const auto& d : r.diagnostics) out << "  " << d << "\n";
    }
    return out.str();
}

}  // namespace

nlohmann::ordered_json report_to_json(const Report& r)
{
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["schema_version"] = r.schema_version;
    doc["seed"] = r.seed;
    doc["algorithm"] = r.algorithm;

    ordered_json partition;
    ordered_json subsets = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.partition.subset_count(); ++i) {
        ordered_json subset;
        subset["index"] = i + 1;
        auto ids = nlohmann::ordered_json::array();
        for (std::size_t idx : r.partition.subset(i))
            ids.push_back(r.partition.evidence_at(idx).id());
        subset["evidence"] = std::move(ids);
        subset["conflict"] = r.assessment.subset_conflicts[i];
        subsets.push_back(std::move(subset));
    }
    partition["subsets"] = std::move(subsets);
    partition["domain_conflict"] = r.assessment.domain_conflict;
    partition["metaconflict"] = r.assessment.metaconflict;
    partition["plausibility"] = r.assessment.partition_plausibility;
    doc["partition"] = std::move(partition);

    ordered_json prior;
    for (const auto& [count, p] : r.partition.prior().masses()) prior[std::to_string(count)] = p;
    doc["prior"] = std::move(prior);

    ordered_json verdicts;
    for (const auto& [count, verdict] : r.count_verdicts)
        verdicts[std::to_string(count)] = verdict_key(verdict);
    doc["count_verdicts"] = std::move(verdicts);
    doc["trace"] = r.trace;

    if (!r.specification.empty()) {
        ordered_json specs = nlohmann::ordered_json::array();
        for (const auto& spec : r.specification) {
            ordered_json s;
            s["id"] = spec.evidence_id;
            s["subset"] = spec.home + 1;
            ordered_json not_in;
            for (const auto& [slot, mass] : spec.membership.not_in)
                not_in[std::to_string(slot + 1)] = mass;
            s["not_in"] = std::move(not_in);
            if (spec.membership.in_own) s["in_own"] = *spec.membership.in_own;
            if (spec.membership.has_new_slot)
                s["new_subset_slot"] = spec.membership.slot_count;
            s["falsity"] = spec.falsity;
            ordered_json combined = nlohmann::ordered_json::array();
            for (const auto& [mask, mass] : spec.combined.not_in_any) {
                ordered_json entry;
                entry["not_in_any_of"] = mask_to_indices(mask);
                entry["mass"] = mass;
                combined.push_back(std::move(entry));
            }
            s["combined"] = std::move(combined);
            s["belief"] = spec.beliefs.belief;
            s["plausibility"] = spec.beliefs.plausibility;
            s["credibility"] = spec.credibility;
            s["discounted"] = mass_function_json(spec.discounted_for_falsity);
            ordered_json per_subset = nlohmann::ordered_json::array();
            for (const auto& m : spec.discounted_per_subset)
                per_subset.push_back(mass_function_json(m));
            s["discounted_per_subset"] = std::move(per_subset);
            specs.push_back(std::move(s));
        }
        doc["specification"] = std::move(specs);
    }

    if (!r.existence.empty()) {
        ordered_json existence = nlohmann::ordered_json::array();
        for (const auto& e : r.existence) {
            ordered_json entry;
            entry["subset"] = e.subset + 1;
            entry["exists"] = e.mass_exists;
            entry["theta"] = e.mass_theta;
            entry["combination_conflict"] = e.combination_conflict;
            entry["emptiness_credibility"] = e.emptiness_credibility;
            entry["discounted_exists"] = e.discounted_exists;
            entry["discounted_theta"] = e.discounted_theta;
            existence.push_back(std::move(entry));
        }
        doc["subset_existence"] = std::move(existence);

        ordered_json combination = nlohmann::ordered_json::array();
        for (const auto& [mask, mass] : r.existence_combination) {
            ordered_json entry;
            entry["subsets"] = mask_to_indices(mask);
            entry["mass"] = mass;
            combination.push_back(std::move(entry));
        }
        doc["existence_combination"] = std::move(combination);
    }

    if (r.counts) {
        ordered_json counts;
        ordered_json at_least;
        for (const auto& [count, mass] : r.counts->at_least)
            at_least[std::to_string(count)] = mass;
        counts["at_least"] = std::move(at_least);
        counts["theta"] = r.counts->theta;
        doc["count_bpa"] = std::move(counts);
    }

    if (r.posterior_distribution) {
        ordered_json posterior;
        posterior["conflict"] = r.posterior_distribution->conflict;
        ordered_json masses;
        for (const auto& [count, mass] : r.posterior_distribution->masses)
            masses[std::to_string(count)] = mass;
        posterior["masses"] = std::move(masses);
        doc["posterior"] = std::move(posterior);
    }

    doc["diagnostics"] = r.diagnostics;
    return doc;
}

std::string render_report(const Report& r, OutputFormat format)
{
    if (format == OutputFormat::kHuman) return render_human(r);
    return report_to_json(r).dump(2) + "\n";
}

}  // namespace evclust
