#pragma once

#include "kahfm/core.hpp"
#include "kahfm/ingest.hpp"

namespace kahfm {

/// Stacked TF-IDF rows: users 0..|U|-1 first, then items |U|..n-1,
/// each of dimension |F|.
struct ProfileMatrix {
    std::vector<SparseVector> rows;
    int numUsers = 0;
    int numItems = 0;
    int dimension = 0;

    const SparseVector& userRow(int u) const { return rows[u]; }
    const SparseVector& itemRow(int i) const { return rows[numUsers + i]; }
};

/// Normalized TF-IDF vector of one item over the retained feature set:
/// value = ln(|I| / df(f)) / sqrt(|F^i ∩ F|) for features on the item,
/// zero elsewhere. Binary triple presence makes the TF numerator 1.
SparseVector tfidf_item_vector(int item, const FeatureStore& store, const FeatureTable& table,
                               int catalogSize);

/// v(u,f) = sum of v(i,f) over I^u divided by the number of items in I^u
/// carrying f with a nonzero value; 0 when no carrier exists.
SparseVector user_profile(const std::vector<SparseVector>& itemVectors,
                          const std::vector<int>& trainItems, int dimension);

/// trainItems come from the training split only.
ProfileMatrix build_profile_matrix(const Dataset& trainData, const FeatureStore& store,
                                   const FeatureTable& table);

}  // namespace kahfm
