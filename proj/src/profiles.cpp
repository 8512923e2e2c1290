#include "kahfm/profiles.hpp"

#include <cassert>
#include <cmath>

namespace kahfm {

SparseVector tfidf_item_vector(int item, const FeatureStore& store, const FeatureTable& table,
                               int catalogSize) {
    SparseVector v(static_cast<int>(table.size()));
    std::vector<std::pair<int, int>> retained;  // (feature id, df)
    for (const auto& f : store.itemFeatures[item]) {
        int id = table.idOf(f);
        if (id < 0) continue;
        auto dfIt = store.featureItemCount.find(f);
        assert(dfIt != store.featureItemCount.end() && dfIt->second > 0);
        retained.emplace_back(id, dfIt->second);
    }
    if (retained.empty()) return v;
    const double tf = 1.0 / std::sqrt(static_cast<double>(retained.size()));
    for (auto [id, df] : retained) {
        double idf = std::log(static_cast<double>(catalogSize) / df);
        v.set(id, tf * idf);  // set() drops the idf == 0 case
    }
    return v;
}

SparseVector user_profile(const std::vector<SparseVector>& itemVectors,
                          const std::vector<int>& trainItems, int dimension) {
    std::map<int, std::pair<double, int>> acc;  // feature -> (sum, carriers)
    for (int item : trainItems) {
        for (const auto& [f, val] : itemVectors[item].entries()) {
            auto& slot = acc[f];
            slot.first += val;
            slot.second += 1;
        }
    }
    SparseVector v(dimension);
    for (const auto& [f, slot] : acc) v.set(f, slot.first / slot.second);
    return v;
}

ProfileMatrix build_profile_matrix(const Dataset& trainData, const FeatureStore& store,
                                   const FeatureTable& table) {
    ProfileMatrix pm;
    pm.numUsers = trainData.numUsers;
    pm.numItems = trainData.numItems;
    pm.dimension = static_cast<int>(table.size());
    pm.rows.resize(pm.numUsers + pm.numItems);

    std::vector<SparseVector> itemVectors(pm.numItems);
    for (int i = 0; i < pm.numItems; ++i) {
        itemVectors[i] = tfidf_item_vector(i, store, table, pm.numItems);
        pm.rows[pm.numUsers + i] = itemVectors[i];
    }
    auto byUser = trainData.userItems();
    for (int u = 0; u < pm.numUsers; ++u)
        pm.rows[u] = user_profile(itemVectors, byUser[u], pm.dimension);
    return pm;
}

}  // namespace kahfm
