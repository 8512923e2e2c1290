#pragma once

#include <optional>

#include "kahfm/bpr.hpp"
#include "kahfm/knn.hpp"
#include "kahfm/profiles.hpp"

namespace kahfm {

/// Per item: the retained feature ids originally describing it, captured
/// before any robustness removal. M_i = |F^i|.
struct ItemGroundTruth {
    std::vector<std::vector<int>> itemFeatures;  // sorted feature ids per item

    static ItemGroundTruth from_store(const FeatureStore& store, const FeatureTable& table);

    int M(int item) const { return static_cast<int>(itemFeatures[item].size()); }
    double featureAverage() const;  // mean M_i over items with M_i >= 1
};

struct SaMode {
    // per-item M by default; fixedM replaces M_i in the top-k size only
    std::optional<int> fixedM;
};

/// Mean over items (M_i >= 1) of |top(v_i, n*M) ∩ F^i| / denom, where
/// denom is M_i (capped at fixedM when set).
double semantic_accuracy(const ItemMatrix& itemRows, const ItemGroundTruth& truth, int n,
                         SaMode mode = {});

/// Original feature of the item with the highest trained value,
/// ties by ascending feature id.
int find_fmax(std::span<const double> itemRow, const std::vector<int>& originalFeatures);

enum class RobMode { Batch, PerItem };

struct RobustnessResult {
    double value = 0.0;  // 1-Rob@nM
    std::vector<int> outcome;  // per item: 1 success, 0 failure, -1 skipped (M_i = 0)
};

/// Retrains from a kaHFM initialization with each item's strongest
/// original feature zeroed in that item's initial row, then checks
/// whether the removed feature re-enters top(v'_i, n*M_i). Batch mode
/// performs one retrain covering all items; per-item retrains per item.
RobustnessResult robustness_protocol(const Dataset& trainData, const ProfileMatrix& profiles,
                                     const ItemGroundTruth& truth, const BprHyper& hyper, int n,
                                     RobMode mode);

/// Same protocol evaluated for several multipliers n at once; the base
/// training and the retrains are shared across the sweep.
std::vector<RobustnessResult> robustness_sweep(const Dataset& trainData,
                                               const ProfileMatrix& profiles,
                                               const ItemGroundTruth& truth,
                                               const BprHyper& hyper, const std::vector<int>& ns,
                                               RobMode mode);

struct ExplainRow {
    int featureId;
    double trainedWeight;
    double tfidfWeight;
    Feature feature;
};

/// Top-K features of one item with trained and original TF-IDF weights
/// side by side.
std::vector<ExplainRow> explain_item(int item, const ItemMatrix& itemRows,
                                     const ProfileMatrix& profiles, const FeatureTable& table,
                                     int K);

struct RecommendationEvidence {
    // neighbors of the recommended item inside the user's history
    std::vector<std::pair<int, double>> contributingNeighbors;
    // shared features ranked by summed product of trained weights
    std::vector<std::pair<int, double>> sharedFeatures;
    double score = 0.0;
};

RecommendationEvidence explain_recommendation(int user, int item, const NeighborIndex& index,
                                              const ItemMatrix& itemRows,
                                              const std::vector<int>& trainItems, int K);

std::string format_explain_table(const std::vector<ExplainRow>& rows);

}  // namespace kahfm
