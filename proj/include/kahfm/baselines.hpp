#pragma once

#include <functional>

#include "kahfm/bpr.hpp"
#include "kahfm/knn.hpp"
#include "kahfm/profiles.hpp"

namespace kahfm {

/// One ranked (item, score) list per user, all respecting the
/// all-unrated-items protocol against the training split.
using RecLists = std::vector<std::vector<std::pair<int, double>>>;

enum class VsmVariant { UserProfileCosine, AbItemKnn };

RecLists most_popular(const Dataset& trainData, int N);

/// Item-item Pearson over co-rating users (mean-centered per item over the
/// co-raters); items with fewer than 2 common users get correlation 0.
RecLists itemknn_pearson(const Dataset& trainData, int k_nn, int N);

RecLists userknn_pearson(const Dataset& trainData, int k_nn, int N);

RecLists vsm_recommend(const ProfileMatrix& profiles, const Dataset& trainData,
                       VsmVariant variant, int k_nn, int N);

/// Random-init FM trained with BPR, ranked by raw FM score.
RecLists bprfm_random(const Dataset& trainData, const BprHyper& hyper, int k, int N,
                      double initScale = 0.1);

/// Shared ranking helper: scores every unrated item for every user.
RecLists rank_by_score(const Dataset& trainData, int N,
                       const std::function<double(int u, int i)>& score);

double pearson(const std::vector<std::pair<double, double>>& paired);

}  // namespace kahfm
