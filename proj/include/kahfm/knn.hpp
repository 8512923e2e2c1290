#pragma once

#include "kahfm/core.hpp"
#include "kahfm/profiles.hpp"

namespace kahfm {

/// Dense item-vector block (numItems x dimension), the view the kNN
/// pipeline works on regardless of whether rows come from a trained
/// model or raw TF-IDF vectors.
struct ItemMatrix {
    std::vector<double> data;
    int numItems = 0;
    int dimension = 0;

    std::span<const double> row(int i) const {
        return {data.data() + static_cast<std::size_t>(i) * dimension,
                static_cast<std::size_t>(dimension)};
    }

    static ItemMatrix from_params(const FMParams& params, int numUsers, int numItems);
    static ItemMatrix from_profiles(const ProfileMatrix& profiles);
};

struct NeighborIndex {
    // per item: (neighbor id, cosine similarity), similarity descending,
    // ties by ascending item id; the item itself never appears
    std::vector<std::vector<std::pair<int, double>>> neighbors;
};

/// dot(a,b) / (|a|·|b|); 0 when either norm is 0.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const SparseVector& a, const SparseVector& b);

NeighborIndex build_neighbors(const ItemMatrix& items, int k_nn);

/// Normalized neighborhood overlap; trainItems must be sorted.
/// 0 when the similarity mass in the denominator vanishes.
double knn_score(int item, const NeighborIndex& index, const std::vector<int>& trainItems);

/// All-unrated-items ranking for one user: every item outside the
/// training profile is scored; ties broken by ascending item id.
std::vector<std::pair<int, double>> recommend_topn(int user, int N, const NeighborIndex& index,
                                                   const std::vector<int>& trainItems,
                                                   int numItems);

}  // namespace kahfm
