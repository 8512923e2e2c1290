#include "kahfm/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace kahfm {

namespace {

std::vector<std::pair<int, double>> take_topn(std::vector<std::pair<int, double>> scored, int N) {
    std::size_t keep = std::min<std::size_t>(N, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                      [](const auto& a, const auto& b) {
                          if (a.second != b.second) return a.second > b.second;
                          return a.first < b.first;
                      });
    scored.resize(keep);
    return scored;
}

// neighbor lists from a dense similarity accessor, excluding self
std::vector<std::vector<std::pair<int, double>>> top_neighbors(
    int count, int k_nn, const std::function<double(int, int)>& sim) {
    std::vector<std::vector<std::pair<int, double>>> out(count);
    for (int a = 0; a < count; ++a) {
        std::vector<std::pair<int, double>> sims;
        sims.reserve(count - 1);
        for (int b = 0; b < count; ++b)
            if (b != a) sims.emplace_back(b, sim(a, b));
        out[a] = take_topn(std::move(sims), k_nn);
    }
    return out;
}

}  // namespace

double pearson(const std::vector<std::pair<double, double>>& paired) {
    if (paired.size() < 2) return 0.0;
    double n = static_cast<double>(paired.size());
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (const auto& [a, b] : paired) {
        sa += a;
        sb += b;
        saa += a * a;
        sbb += b * b;
        sab += a * b;
    }
    double num = n * sab - sa * sb;
    double da = n * saa - sa * sa;
    double db = n * sbb - sb * sb;
    if (da <= 0.0 || db <= 0.0) return 0.0;
    return num / std::sqrt(da * db);
}

RecLists rank_by_score(const Dataset& trainData, int N,
                       const std::function<double(int, int)>& score) {
    auto byUser = trainData.userItems();
    RecLists recs(trainData.numUsers);
    for (int u = 0; u < trainData.numUsers; ++u) {
        std::vector<std::pair<int, double>> scored;
        scored.reserve(trainData.numItems);
        for (int i = 0; i < trainData.numItems; ++i) {
            if (std::binary_search(byUser[u].begin(), byUser[u].end(), i)) continue;
            scored.emplace_back(i, score(u, i));
        }
        recs[u] = take_topn(std::move(scored), N);
    }
    return recs;
}

RecLists most_popular(const Dataset& trainData, int N) {
    std::vector<double> counts(trainData.numItems, 0.0);
    for (const auto& t : trainData.interactions) counts[t.item] += 1.0;
    return rank_by_score(trainData, N, [&](int, int i) { return counts[i]; });
}

namespace {

// ratings per entity: implicit interactions count as 1.0
std::vector<std::vector<std::pair<int, double>>> ratings_by(const Dataset& ds, bool byItem) {
    std::vector<std::vector<std::pair<int, double>>> out(byItem ? ds.numItems : ds.numUsers);
    for (const auto& t : ds.interactions) {
        int key = byItem ? t.item : t.user;
        int other = byItem ? t.user : t.item;
        out[key].emplace_back(other, t.rating.value_or(1.0));
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
}

double pearson_common(const std::vector<std::pair<int, double>>& a,
                      const std::vector<std::pair<int, double>>& b) {
    std::vector<std::pair<double, double>> paired;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia].first < b[ib].first) {
            ++ia;
        } else if (b[ib].first < a[ia].first) {
            ++ib;
        } else {
            paired.emplace_back(a[ia].second, b[ib].second);
            ++ia;
            ++ib;
        }
    }
    return pearson(paired);
}

}  // namespace

RecLists itemknn_pearson(const Dataset& trainData, int k_nn, int N) {
    auto byItem = ratings_by(trainData, true);
    auto neighbors = top_neighbors(trainData.numItems, k_nn, [&](int a, int b) {
        return pearson_common(byItem[a], byItem[b]);
    });
    auto byUser = trainData.userItems();
    return rank_by_score(trainData, N, [&](int u, int i) {
        double num = 0.0, den = 0.0;
        for (const auto& [j, cs] : neighbors[i]) {
            den += cs;
            if (std::binary_search(byUser[u].begin(), byUser[u].end(), j)) num += cs;
        }
        return std::fabs(den) < 1e-12 ? 0.0 : num / den;
    });
}

RecLists userknn_pearson(const Dataset& trainData, int k_nn, int N) {
    auto byUserRatings = ratings_by(trainData, false);
    auto neighbors = top_neighbors(trainData.numUsers, k_nn, [&](int a, int b) {
        return pearson_common(byUserRatings[a], byUserRatings[b]);
    });
    auto byUser = trainData.userItems();
    return rank_by_score(trainData, N, [&](int u, int i) {
        double num = 0.0, den = 0.0;
        for (const auto& [v, s] : neighbors[u]) {
            den += s;
            if (std::binary_search(byUser[v].begin(), byUser[v].end(), i)) num += s;
        }
        return std::fabs(den) < 1e-12 ? 0.0 : num / den;
    });
}

RecLists vsm_recommend(const ProfileMatrix& profiles, const Dataset& trainData,
                       VsmVariant variant, int k_nn, int N) {
    if (variant == VsmVariant::UserProfileCosine) {
        return rank_by_score(trainData, N, [&](int u, int i) {
            return cosine(profiles.userRow(u), profiles.itemRow(i));
        });
    }
    auto items = ItemMatrix::from_profiles(profiles);
    auto index = build_neighbors(items, k_nn);
    auto byUser = trainData.userItems();
    RecLists recs(trainData.numUsers);
    for (int u = 0; u < trainData.numUsers; ++u)
        recs[u] = recommend_topn(u, N, index, byUser[u], trainData.numItems);
    return recs;
}

RecLists bprfm_random(const Dataset& trainData, const BprHyper& hyper, int k, int N,
                      double initScale) {
    FMParams params = init_random(trainData.numUsers + trainData.numItems, k, hyper.seed,
                                  initScale);
    train(params, trainData, hyper);
    return rank_by_score(trainData, N, [&](int u, int i) {
        return fm_score_pair(u, i, params, trainData.numUsers);
    });
}

}  // namespace kahfm
