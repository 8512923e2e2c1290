#include "kahfm/ingest.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kahfm {

namespace {

const std::unordered_map<std::string, std::string>& prefix_table() {
    static const std::unordered_map<std::string, std::string> table = {
        {"dct", "http://purl.org/dc/terms/"},
        {"dcterms", "http://purl.org/dc/terms/"},
        {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
        {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
        {"owl", "http://www.w3.org/2002/07/owl#"},
        {"dbo", "http://dbpedia.org/ontology/"},
        {"dbr", "http://dbpedia.org/resource/"},
        {"dbc", "http://dbpedia.org/resource/Category:"},
        {"foaf", "http://xmlns.com/foaf/0.1/"},
        {"prov", "http://www.w3.org/ns/prov#"},
    };
    return table;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void line_error(const std::string& path, int lineNo, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(lineNo) + ": " + msg);
}

double parse_real(const std::string& s, const std::string& path, int lineNo) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        line_error(path, lineNo, "malformed number '" + s + "'");
    }
}

std::int64_t parse_int(const std::string& s, const std::string& path, int lineNo) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        line_error(path, lineNo, "malformed integer '" + s + "'");
    return v;
}

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

const std::array<std::string, 5> kNoisyPredicates = {
    "owl:sameAs", "dbo:thumbnail", "foaf:depiction",
    "prov:wasDerivedFrom", "foaf:isPrimaryTopicOf"};

}  // namespace

std::string expand_prefix(const std::string& name) {
    std::size_t colon = name.find(':');
    if (colon == std::string::npos) return name;
    std::string prefix = name.substr(0, colon);
    auto it = prefix_table().find(prefix);
    if (it == prefix_table().end()) return name;  // full IRI or unknown prefix
    return it->second + name.substr(colon + 1);
}

void FeatureStore::recount() {
    featureItemCount.clear();
    for (const auto& feats : itemFeatures)
        for (const auto& f : feats) ++featureItemCount[f];
}

Dataset load_interactions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open interactions file: " + path);

    Dataset ds;
    // (user, item) -> position in ds.interactions, last occurrence wins
    std::map<std::pair<int, int>, std::size_t> seen;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (blank_or_comment(line)) continue;
        auto cols = split_tabs(strip_cr(line));
        if (cols.size() < 2 || cols.size() > 4 || cols[0].empty() || cols[1].empty())
            line_error(path, lineNo, "expected user\\titem[\\trating[\\ttimestamp]]");

        Interaction t;
        auto [uit, unew] = ds.userIndex.try_emplace(cols[0], ds.numUsers);
        if (unew) {
            ds.userIds.push_back(cols[0]);
            ++ds.numUsers;
        }
        t.user = uit->second;
        auto [iit, inew] = ds.itemIndex.try_emplace(cols[1], ds.numItems);
        if (inew) {
            ds.itemIds.push_back(cols[1]);
            ++ds.numItems;
        }
        t.item = iit->second;
        if (cols.size() >= 3) {
            double r = parse_real(cols[2], path, lineNo);
            if (r < 1.0 || r > 5.0) line_error(path, lineNo, "rating outside [1,5]");
            t.rating = r;
        }
        if (cols.size() == 4) t.timestamp = parse_int(cols[3], path, lineNo);

        auto key = std::make_pair(t.user, t.item);
        auto sit = seen.find(key);
        if (sit != seen.end()) {
            ds.interactions[sit->second] = t;
        } else {
            seen.emplace(key, ds.interactions.size());
            ds.interactions.push_back(t);
        }
    }
    if (ds.interactions.empty())
        throw std::runtime_error("empty interactions file: " + path);
    return ds;
}

namespace {

// Parses one N-Triples-subset line into subject IRI, predicate IRI, object.
bool parse_ntriple(const std::string& line, std::string& s, std::string& p, std::string& o) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    };
    auto read_iri = [&](std::string& out) {
        if (pos >= line.size() || line[pos] != '<') return false;
        std::size_t end = line.find('>', pos);
        if (end == std::string::npos) return false;
        out = line.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        return true;
    };
    skip_ws();
    if (!read_iri(s)) return false;
    skip_ws();
    if (!read_iri(p)) return false;
    skip_ws();
    if (pos < line.size() && line[pos] == '"') {
        std::size_t end = line.find('"', pos + 1);
        while (end != std::string::npos && line[end - 1] == '\\') end = line.find('"', end + 1);
        if (end == std::string::npos) return false;
        o = line.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        // language tag / datatype passthrough: skip to the terminating dot
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    } else if (!read_iri(o)) {
        return false;
    }
    skip_ws();
    return pos < line.size() && line[pos] == '.';
}

}  // namespace

FeatureStore load_triples(const std::string& path, TripleFormat format, const Dataset& dataset,
                          const std::string& mappingPath) {
    // iri -> dense item id, for N-Triples subjects
    std::unordered_map<std::string, int> iriToItem;
    if (!mappingPath.empty()) {
        std::ifstream min(mappingPath);
        if (!min) throw std::runtime_error("cannot open item mapping file: " + mappingPath);
        std::string line;
        int lineNo = 0;
        while (std::getline(min, line)) {
            ++lineNo;
            if (blank_or_comment(line)) continue;
            auto cols = split_tabs(strip_cr(line));
            if (cols.size() != 2) line_error(mappingPath, lineNo, "expected item_id\\titem_iri");
            auto it = dataset.itemIndex.find(cols[0]);
            if (it != dataset.itemIndex.end()) iriToItem[cols[1]] = it->second;
        }
    }

    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triples file: " + path);

    FeatureStore store;
    store.itemFeatures.resize(dataset.numItems);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (blank_or_comment(line)) continue;
        line = strip_cr(line);

        std::string subject, predicate, object;
        if (format == TripleFormat::Tsv) {
            auto cols = split_tabs(line);
            if (cols.size() != 3 || cols[0].empty() || cols[1].empty() || cols[2].empty())
                line_error(path, lineNo, "expected item_id\\tpredicate\\tobject");
            subject = cols[0];
            predicate = cols[1];
            object = cols[2];
        } else {
            if (!parse_ntriple(line, subject, predicate, object))
                line_error(path, lineNo, "invalid N-Triples line");
        }

        int item = -1;
        if (format == TripleFormat::NTriples) {
            auto it = iriToItem.find(subject);
            if (it != iriToItem.end()) item = it->second;
        } else {
            auto it = dataset.itemIndex.find(subject);
            if (it != dataset.itemIndex.end()) item = it->second;
        }
        if (item < 0) {
            ++store.skippedTriples;
            continue;
        }
        store.itemFeatures[item].insert(
            Feature{expand_prefix(predicate), expand_prefix(object)});
    }
    store.recount();
    return store;
}

FeatureStore exclude_noisy(const FeatureStore& store) {
    std::set<std::string> noisy;
    for (const auto& p : kNoisyPredicates) noisy.insert(expand_prefix(p));

    FeatureStore out;
    out.itemFeatures.resize(store.itemFeatures.size());
    out.skippedTriples = store.skippedTriples;
    for (std::size_t i = 0; i < store.itemFeatures.size(); ++i)
        for (const auto& f : store.itemFeatures[i])
            if (!noisy.count(f.predicate)) out.itemFeatures[i].insert(f);
    out.recount();
    return out;
}

FeatureStore select_setting(const FeatureStore& store, SettingKind setting) {
    const std::string subject = expand_prefix("dcterms:subject");
    const std::string rdfType = expand_prefix("rdf:type");
    auto keep = [&](const Feature& f) {
        switch (setting) {
            case SettingKind::Categorical: return f.predicate == subject;
            case SettingKind::Ontological: return f.predicate == rdfType;
            case SettingKind::Factual:
                return f.predicate != subject && f.predicate != rdfType;
        }
        return false;
    };

    FeatureStore out;
    out.itemFeatures.resize(store.itemFeatures.size());
    out.skippedTriples = store.skippedTriples;
    for (std::size_t i = 0; i < store.itemFeatures.size(); ++i)
        for (const auto& f : store.itemFeatures[i])
            if (keep(f)) out.itemFeatures[i].insert(f);
    out.recount();
    return out;
}

FeatureTable filter_by_missing(const FeatureStore& store, double thresholdPercent,
                               int catalogSize) {
    if (thresholdPercent < 0.0 || thresholdPercent > 100.0)
        throw std::invalid_argument("filter_by_missing: threshold outside [0,100]");
    FeatureTable table;
    for (const auto& [f, count] : store.featureItemCount) {
        double missing = 100.0 * (catalogSize - count) / catalogSize;
        if (missing <= thresholdPercent) {
            table.index.emplace(f, static_cast<int>(table.features.size()));
            table.features.push_back(f);  // map iteration is already lexicographic
        }
    }
    return table;
}

FeatureStore restrict_to(const FeatureStore& store, const FeatureTable& table) {
    FeatureStore out;
    out.itemFeatures.resize(store.itemFeatures.size());
    out.skippedTriples = store.skippedTriples;
    for (std::size_t i = 0; i < store.itemFeatures.size(); ++i)
        for (const auto& f : store.itemFeatures[i])
            if (table.index.count(f)) out.itemFeatures[i].insert(f);
    out.recount();
    return out;
}

Stats dataset_stats(const Dataset& dataset, const FeatureStore& store) {
    Stats s;
    s.users = dataset.numUsers;
    s.items = dataset.numItems;
    s.transactions = dataset.interactions.size();
    s.features = store.numDistinctFeatures();
    double cells = static_cast<double>(dataset.numUsers) * dataset.numItems;
    s.sparsityPercent = cells > 0 ? 100.0 * (1.0 - s.transactions / cells) : 0.0;
    return s;
}

SettingKind parse_setting(const std::string& name) {
    if (name == "cs" || name == "categorical") return SettingKind::Categorical;
    if (name == "os" || name == "ontological") return SettingKind::Ontological;
    if (name == "fs" || name == "factual") return SettingKind::Factual;
    throw std::invalid_argument("unknown setting '" + name + "' (expected cs|os|fs)");
}

}  // namespace kahfm
