#pragma once

#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "kahfm/core.hpp"

namespace kahfm {

enum class SettingKind { Categorical, Ontological, Factual };

enum class TripleFormat { Tsv, NTriples };

/// Item descriptions extracted from the knowledge graph, restricted to
/// items present in the Dataset's catalog.
struct FeatureStore {
    std::vector<std::set<Feature>> itemFeatures;  // by dense item id
    std::map<Feature, int> featureItemCount;
    int skippedTriples = 0;  // unresolvable item references

    std::size_t numDistinctFeatures() const { return featureItemCount.size(); }
    void recount();
};

/// The retained feature set F after filtering: dense ids 0..|F|-1 assigned
/// in lexicographic (predicate, object) order.
struct FeatureTable {
    std::vector<Feature> features;  // id -> feature
    std::map<Feature, int> index;

    std::size_t size() const { return features.size(); }
    int idOf(const Feature& f) const {
        auto it = index.find(f);
        return it == index.end() ? -1 : it->second;
    }
};

struct Stats {
    int users = 0;
    int items = 0;
    std::size_t transactions = 0;
    std::size_t features = 0;
    double sparsityPercent = 0.0;
};

/// Expands a prefixed name (dct:subject, rdf:type, ...) to a full IRI.
/// Unknown prefixes and full IRIs pass through unchanged.
std::string expand_prefix(const std::string& name);

/// TSV: user \t item [\t rating [\t timestamp]]. '#' lines ignored.
/// Dense ids in first-seen order; duplicate (user, item) keeps the last line.
Dataset load_interactions(const std::string& path);

/// TSV: item_id \t predicate \t object. N-Triples subset: <s> <p> <o> .
/// and <s> <p> "literal" . lines, with subjects resolved through the
/// item mapping (item_id \t item_iri) when provided.
FeatureStore load_triples(const std::string& path, TripleFormat format, const Dataset& dataset,
                          const std::string& mappingPath = "");

/// Drops features whose predicate is one of the known noisy ones
/// (owl:sameAs, dbo:thumbnail, foaf:depiction, prov:wasDerivedFrom,
/// foaf:isPrimaryTopicOf).
FeatureStore exclude_noisy(const FeatureStore& store);

/// CS keeps only dcterms:subject, OS only rdf:type, FS everything else.
FeatureStore select_setting(const FeatureStore& store, SettingKind setting);

/// Retains f iff its missing percentage over the catalog is <= threshold.
FeatureTable filter_by_missing(const FeatureStore& store, double thresholdPercent,
                               int catalogSize);

/// Restricts the store to the retained features (counts recomputed).
FeatureStore restrict_to(const FeatureStore& store, const FeatureTable& table);

Stats dataset_stats(const Dataset& dataset, const FeatureStore& store);

SettingKind parse_setting(const std::string& name);

}  // namespace kahfm
