#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "kahfm/core.hpp"
#include "kahfm/ingest.hpp"
#include "kahfm/profiles.hpp"
#include "kahfm/rng.hpp"

namespace kahfm::testing {

struct Row {
    int user;
    int item;
    double rating = 0.0;         // 0 = implicit
    std::int64_t timestamp = -1;  // -1 = absent
};

inline Dataset make_dataset(int numUsers, int numItems, const std::vector<Row>& rows) {
    Dataset ds;
    ds.numUsers = numUsers;
    ds.numItems = numItems;
    for (int u = 0; u < numUsers; ++u) {
        ds.userIds.push_back("u" + std::to_string(u));
        ds.userIndex.emplace(ds.userIds.back(), u);
    }
    for (int i = 0; i < numItems; ++i) {
        ds.itemIds.push_back("m" + std::to_string(i));
        ds.itemIndex.emplace(ds.itemIds.back(), i);
    }
    for (const auto& r : rows) {
        Interaction t;
        t.user = r.user;
        t.item = r.item;
        if (r.rating > 0.0) t.rating = r.rating;
        if (r.timestamp >= 0) t.timestamp = r.timestamp;
        ds.interactions.push_back(t);
    }
    return ds;
}

// zero-padded object keeps lexicographic order equal to numeric order
inline Feature feat(int id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "o%03d", id);
    return {"p", buf};
}

/// Store where item i carries the given feature ids; counts recomputed.
inline FeatureStore make_store(int numItems, const std::vector<std::vector<int>>& featureIds) {
    FeatureStore store;
    store.itemFeatures.resize(numItems);
    for (int i = 0; i < static_cast<int>(featureIds.size()); ++i)
        for (int f : featureIds[i]) store.itemFeatures[i].insert(feat(f));
    store.recount();
    return store;
}

/// Synthetic corpus: every item has 3..8 features, none universal, so all
/// TF-IDF values are strictly positive.
struct Corpus {
    Dataset dataset;
    FeatureStore store;
    FeatureTable table;
    ProfileMatrix profiles;
};

inline Corpus make_corpus(int numUsers = 8, int numItems = 12, std::uint64_t seed = 5) {
    Rng rng(seed);
    std::vector<std::vector<int>> featureIds(numItems);
    const int pool = 20;
    for (int i = 0; i < numItems; ++i) {
        int count = 3 + static_cast<int>(rng.below(6));
        while (static_cast<int>(featureIds[i].size()) < count) {
            int f = static_cast<int>(rng.below(pool));
            if (std::find(featureIds[i].begin(), featureIds[i].end(), f) == featureIds[i].end())
                featureIds[i].push_back(f);
        }
    }

    std::vector<Row> rows;
    for (int u = 0; u < numUsers; ++u) {
        int count = std::min(numItems, 3 + static_cast<int>(rng.below(5)));
        std::vector<int> picked;
        while (static_cast<int>(picked.size()) < count) {
            int i = static_cast<int>(rng.below(numItems));
            if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
        }
        for (int i : picked)
            rows.push_back({u, i, static_cast<double>(1 + rng.below(5)),
                            static_cast<std::int64_t>(rng.below(100000))});
    }

    Corpus c;
    c.dataset = make_dataset(numUsers, numItems, rows);
    c.store = make_store(numItems, featureIds);
    // guard against a feature covering the whole catalog (idf would be 0)
    for (auto& [f, count] : c.store.featureItemCount)
        if (count == numItems) c.store.itemFeatures[0].erase(f);
    c.store.recount();
    c.table = filter_by_missing(c.store, 100.0, numItems);
    c.profiles = build_profile_matrix(c.dataset, c.store, c.table);
    return c;
}

class TempFile {
public:
    explicit TempFile(const std::string& content, const std::string& name = "kahfm_test.tsv") {
        path_ = (std::filesystem::temp_directory_path() /
                 (name + "." + std::to_string(counter_++)))
                    .string();
        std::ofstream out(path_, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    static inline int counter_ = 0;
};

}  // namespace kahfm::testing
