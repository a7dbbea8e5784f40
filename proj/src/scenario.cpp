#include "evclust/scenario.hpp"

#include <fstream>
#include <set>

namespace evclust {

namespace {

using nlohmann::json;

const json& require(const json& doc, const char* key, const std::string& where)
{
    auto it = doc.find(key);
    if (it == doc.end()) throw ValidationError(where + ": missing field '" + key + "'");
    return *it;
}

std::vector<std::string> parse_event_labels(const json& events)
{
    std::vector<std::string> labels;
    if (events.is_number_integer()) {
        int count = events.get<int>();
        if (count < 1 || count > 64)
            throw ValidationError("events: count must be between 1 and 64");
        for (int i = 1; i <= count; ++i) labels.push_back(std::to_string(i));
    } else if (events.is_array()) {
        for (const auto& e : events) {
            if (!e.is_string()) throw ValidationError("events: labels must be strings");
            labels.push_back(e.get<std::string>());
        }
        if (labels.empty() || labels.size() > 64)
            throw ValidationError("events: between 1 and 64 labels required");
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != labels.size()) throw ValidationError("events: duplicate label");
    } else {
        throw ValidationError("events: expected an integer count or a list of labels");
    }
    return labels;
}

std::uint64_t parse_event_refs(const json& refs, const std::vector<std::string>& labels,
                               const std::string& where)
{
    if (!refs.is_array() || refs.empty())
        throw ValidationError(where + ": expected a non-empty list of events");
    std::uint64_t bits = 0;
    for (const auto& ref : refs) {
        std::size_t index;
        if (ref.is_number_integer()) {
            int v = ref.get<int>();
            if (v < 1 || static_cast<std::size_t>(v) > labels.size())
                throw ValidationError(where + ": event " + std::to_string(v) + " out of range");
            index = static_cast<std::size_t>(v - 1);
        } else if (ref.is_string()) {
            auto it = std::find(labels.begin(), labels.end(), ref.get<std::string>());
            if (it == labels.end())
                throw ValidationError(where + ": unknown event label " + ref.get<std::string>());
            index = static_cast<std::size_t>(it - labels.begin());
        } else {
            throw ValidationError(where + ": event references must be indices or labels");
        }
        bits |= std::uint64_t{1} << index;
    }
    return bits;
}

FocalSet parse_focal(const json& over, const Frame& frame, const std::string& where)
{
    if (!over.is_array() || over.empty())
        throw ValidationError(where + ": expected a non-empty list of hypothesis labels");
    std::uint64_t bits = 0;
    for (const auto& label : over) {
        if (!label.is_string())
            throw ValidationError(where + ": hypothesis labels must be strings");
        try {
            bits |= std::uint64_t{1} << frame.index_of(label.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
    return FocalSet::from_bits(bits);
}

Evidence parse_evidence(const json& doc, const Frame& frame,
                        const std::vector<std::string>& events, const std::string& where)
{
    if (!doc.is_object()) throw ValidationError(where + ": expected an object");
    std::string id = require(doc, "id", where).get<std::string>();
    const json& action = require(doc, "action", where);
    if (!action.is_array() || action.empty())
        throw ValidationError(where + ": action needs at least one focal element");
    std::vector<WeightedFocal> focals;
    for (std::size_t k = 0; k < action.size(); ++k) {
        const std::string focal_where = where + ".action[" + std::to_string(k) + "]";
        const json& entry = action[k];
        FocalSet focal = parse_focal(require(entry, "over", focal_where), frame, focal_where);
        const json& mass = require(entry, "mass", focal_where);
        if (!mass.is_number()) throw ValidationError(focal_where + ": mass must be a number");
        focals.push_back({focal, mass.get<double>()});
    }
    std::uint64_t bits = parse_event_refs(require(doc, "events", where), events, where + ".events");
    try {
        return Evidence(std::move(id), frame, std::move(focals), bits);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

PriorCounts parse_prior(const json& doc, std::size_t event_count)
{
    if (!doc.is_object()) throw ValidationError("prior: expected an object of count -> probability");
    std::map<int, double> masses;
    for (const auto& [key, value] : doc.items()) {
        int count;
        try {
            std::size_t used = 0;
            count = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ValidationError("prior: key '" + key + "' is not an event count");
        }
        if (count < 0) throw ValidationError("prior: negative event count");
        if (static_cast<std::size_t>(count) > event_count)
            throw ValidationError("prior: count " + key + " exceeds the declared events");
        if (!value.is_number()) throw ValidationError("prior: probability must be a number");
        masses[count] = value.get<double>();
    }
    try {
        return PriorCounts(std::move(masses));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("prior: ") + e.what());
    }
}

SearchConfig parse_config(const json& doc)
{
    SearchConfig config;
    if (doc.is_null()) return config;
    if (!doc.is_object()) throw ValidationError("config: expected an object");
    if (auto it = doc.find("seed"); it != doc.end()) config.rng_seed = it->get<std::uint64_t>();
    if (auto it = doc.find("restarts"); it != doc.end()) {
        config.restarts = it->get<int>();
        if (config.restarts < 1) throw ValidationError("config.restarts: must be at least 1");
    }
    if (auto it = doc.find("max_exhaustive"); it != doc.end()) {
        int v = it->get<int>();
        if (v < 1) throw ValidationError("config.max_exhaustive: must be at least 1");
        config.max_exhaustive_n = static_cast<std::size_t>(v);
    }
    if (auto it = doc.find("candidate_counts"); it != doc.end()) {
        if (!it->is_array()) throw ValidationError("config.candidate_counts: expected a list");
        std::set<int> counts;
        for (const auto& c : *it) counts.insert(c.get<int>());
        config.candidate_counts = std::move(counts);
    }
    return config;
}

}  // namespace

Scenario scenario_from_json(const json& doc)
{
    if (!doc.is_object()) throw ValidationError("scenario: expected a JSON object");
    int version = 1;
    if (auto it = doc.find("schema_version"); it != doc.end()) version = it->get<int>();
    if (version != 1) throw ValidationError("scenario: unsupported schema_version");

    const json& frame_doc = require(doc, "action_frame", "scenario");
    if (!frame_doc.is_array()) throw ValidationError("action_frame: expected a list of labels");
    std::vector<std::string> labels;
    for (const auto& l : frame_doc) {
        if (!l.is_string()) throw ValidationError("action_frame: labels must be strings");
        labels.push_back(l.get<std::string>());
    }
    Frame frame = [&] {
        try {
            return Frame(std::move(labels));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(std::string("action_frame: ") + e.what());
        }
    }();

    std::vector<std::string> events = parse_event_labels(require(doc, "events", "scenario"));

    const json& evidence_doc = require(doc, "evidence", "scenario");
    if (!evidence_doc.is_array() || evidence_doc.empty())
        throw ValidationError("evidence: at least one item is required");
    std::vector<Evidence> evidence;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < evidence_doc.size(); ++i) {
        evidence.push_back(parse_evidence(evidence_doc[i], frame, events,
                                          "evidence[" + std::to_string(i) + "]"));
        if (!ids.insert(evidence.back().id()).second)
            throw ValidationError("evidence: duplicate id " + evidence.back().id());
    }

    PriorCounts prior = parse_prior(require(doc, "prior", "scenario"), events.size());
    SearchConfig config = parse_config(doc.contains("config") ? doc["config"] : json(nullptr));

    return Scenario{version, std::move(frame), std::move(events), std::move(evidence),
                    std::move(prior), std::move(config)};
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario parse error in " + path.string() + ": " + e.what());
    }
    return scenario_from_json(doc);
}

nlohmann::json scenario_to_json(const Scenario& s)
{
    json doc;
    doc["schema_version"] = s.schema_version;
    doc["action_frame"] = s.action_frame.labels();
    doc["events"] = s.event_labels;
    json evidence = json::array();
    for (const auto& e : s.evidence) {
        json item;
        item["id"] = e.id();
        json action = json::array();
        for (const auto& [focal, mass] : e.action_focals()) {
            json entry;
            json over = json::array();
            for (std::size_t i = 0; i < s.action_frame.size(); ++i)
                if (focal.contains(i)) over.push_back(s.action_frame.label(i));
            entry["over"] = std::move(over);
            entry["mass"] = mass;
            action.push_back(std::move(entry));
        }
        item["action"] = std::move(action);
        json events = json::array();
        for (std::size_t i = 0; i < s.event_labels.size(); ++i)
            if (e.event_bits() & (std::uint64_t{1} << i)) events.push_back(s.event_labels[i]);
        item["events"] = std::move(events);
        evidence.push_back(std::move(item));
    }
    doc["evidence"] = std::move(evidence);
    json prior;
    for (const auto& [count, p] : s.prior.masses()) prior[std::to_string(count)] = p;
    doc["prior"] = std::move(prior);
    json config;
    config["seed"] = s.config.rng_seed;
    config["restarts"] = s.config.restarts;
    config["max_exhaustive"] = s.config.max_exhaustive_n;
    if (s.config.candidate_counts)
        config["candidate_counts"] =
            std::vector<int>(s.config.candidate_counts->begin(), s.config.candidate_counts->end());
    doc["config"] = std::move(config);
    return doc;
}

}  // namespace evclust
