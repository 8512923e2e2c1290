#include "kahfm/knn.hpp"

#include <algorithm>
#include <cmath>

namespace kahfm {

ItemMatrix ItemMatrix::from_params(const FMParams& params, int numUsers, int numItems) {
    ItemMatrix m;
    m.numItems = numItems;
    m.dimension = params.k;
    m.data.assign(static_cast<std::size_t>(numItems) * params.k, 0.0);
    for (int i = 0; i < numItems; ++i) {
        auto src = params.itemRow(i, numUsers);
        std::copy(src.begin(), src.end(), m.data.begin() + static_cast<std::size_t>(i) * params.k);
    }
    return m;
}

ItemMatrix ItemMatrix::from_profiles(const ProfileMatrix& profiles) {
    ItemMatrix m;
    m.numItems = profiles.numItems;
    m.dimension = profiles.dimension;
    m.data.assign(static_cast<std::size_t>(m.numItems) * m.dimension, 0.0);
    for (int i = 0; i < m.numItems; ++i) {
        double* row = m.data.data() + static_cast<std::size_t>(i) * m.dimension;
        for (const auto& [f, val] : profiles.itemRow(i).entries()) row[f] = val;
    }
    return m;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    double num = dot(a, b);
    double na = std::sqrt(dot(a, a));
    double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return num / (na * nb);
}

double cosine(const SparseVector& a, const SparseVector& b) {
    double num = dot(a, b);
    double na = std::sqrt(dot(a, a));
    double nb = std::sqrt(dot(b, b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return num / (na * nb);
}

NeighborIndex build_neighbors(const ItemMatrix& items, int k_nn) {
    NeighborIndex index;
    index.neighbors.resize(items.numItems);
    std::vector<double> norms(items.numItems);
    for (int i = 0; i < items.numItems; ++i) norms[i] = std::sqrt(dot(items.row(i), items.row(i)));

    for (int i = 0; i < items.numItems; ++i) {
        std::vector<std::pair<int, double>> sims;
        sims.reserve(items.numItems - 1);
        for (int j = 0; j < items.numItems; ++j) {
            if (j == i) continue;
            double cs = 0.0;
            if (norms[i] != 0.0 && norms[j] != 0.0)
                cs = dot(items.row(i), items.row(j)) / (norms[i] * norms[j]);
            sims.emplace_back(j, cs);
        }
        std::size_t keep = std::min<std::size_t>(k_nn, sims.size());
        std::partial_sort(sims.begin(), sims.begin() + keep, sims.end(),
                          [](const auto& a, const auto& b) {
                              if (a.second != b.second) return a.second > b.second;
                              return a.first < b.first;
                          });
        sims.resize(keep);
        index.neighbors[i] = std::move(sims);
    }
    return index;
}

double knn_score(int item, const NeighborIndex& index, const std::vector<int>& trainItems) {
    double num = 0.0, den = 0.0;
    for (const auto& [j, cs] : index.neighbors[item]) {
        den += cs;
        if (std::binary_search(trainItems.begin(), trainItems.end(), j)) num += cs;
    }
    if (std::fabs(den) < 1e-12) return 0.0;
    return num / den;
}

std::vector<std::pair<int, double>> recommend_topn(int user, int N, const NeighborIndex& index,
                                                   const std::vector<int>& trainItems,
                                                   int numItems) {
    (void)user;
    std::vector<std::pair<int, double>> scored;
    scored.reserve(numItems);
    for (int i = 0; i < numItems; ++i) {
        if (std::binary_search(trainItems.begin(), trainItems.end(), i)) continue;
        scored.emplace_back(i, knn_score(i, index, trainItems));
    }
    std::size_t keep = std::min<std::size_t>(N, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                      [](const auto& a, const auto& b) {
                          if (a.second != b.second) return a.second > b.second;
                          return a.first < b.first;
                      });
    scored.resize(keep);
    return scored;
}

}  // namespace kahfm
