#include "kahfm/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace kahfm {

ItemGroundTruth ItemGroundTruth::from_store(const FeatureStore& store, const FeatureTable& table) {
    ItemGroundTruth truth;
    truth.itemFeatures.resize(store.itemFeatures.size());
    for (std::size_t i = 0; i < store.itemFeatures.size(); ++i) {
        for (const auto& f : store.itemFeatures[i]) {
            int id = table.idOf(f);
            if (id >= 0) truth.itemFeatures[i].push_back(id);
        }
        std::sort(truth.itemFeatures[i].begin(), truth.itemFeatures[i].end());
    }
    return truth;
}

double ItemGroundTruth::featureAverage() const {
    double sum = 0.0;
    int count = 0;
    for (const auto& feats : itemFeatures) {
        if (feats.empty()) continue;
        sum += static_cast<double>(feats.size());
        ++count;
    }
    return count > 0 ? sum / count : 0.0;
}

double semantic_accuracy(const ItemMatrix& itemRows, const ItemGroundTruth& truth, int n,
                         SaMode mode) {
    if (itemRows.numItems == 0) throw std::invalid_argument("semantic_accuracy: empty catalog");
    if (n < 1) throw std::invalid_argument("semantic_accuracy: n must be >= 1");
    double sum = 0.0;
    int counted = 0;
    for (int i = 0; i < itemRows.numItems; ++i) {
        int M = truth.M(i);
        if (M == 0) continue;
        int topSize = n * (mode.fixedM ? *mode.fixedM : M);
        int denom = mode.fixedM ? std::min(M, *mode.fixedM) : M;
        auto top = top_k(itemRows.row(i), static_cast<std::size_t>(topSize));
        int hits = 0;
        const auto& orig = truth.itemFeatures[i];
        for (const auto& [f, val] : top)
            if (std::binary_search(orig.begin(), orig.end(), f)) ++hits;
        sum += static_cast<double>(std::min(hits, denom)) / denom;
        ++counted;
    }
    if (counted == 0) return 0.0;
    return sum / counted;
}

int find_fmax(std::span<const double> itemRow, const std::vector<int>& originalFeatures) {
    if (originalFeatures.empty())
        throw std::invalid_argument("find_fmax: item has no original features");
    int best = originalFeatures.front();
    for (int f : originalFeatures)
        if (itemRow[f] > itemRow[best]) best = f;  // ties keep the lower id
    return best;
}

namespace {

ItemMatrix train_from(const ProfileMatrix& profiles, const Dataset& trainData,
                      const BprHyper& hyper) {
    FMParams params = init_kahfm(profiles);
    train(params, trainData, hyper);
    return ItemMatrix::from_params(params, trainData.numUsers, trainData.numItems);
}

bool in_top(std::span<const double> row, int feature, int topSize) {
    auto top = top_k(row, static_cast<std::size_t>(topSize));
    for (const auto& [f, val] : top)
        if (f == feature) return true;
    return false;
}

}  // namespace

std::vector<RobustnessResult> robustness_sweep(const Dataset& trainData,
                                               const ProfileMatrix& profiles,
                                               const ItemGroundTruth& truth,
                                               const BprHyper& hyper, const std::vector<int>& ns,
                                               RobMode mode) {
    auto baseRows = train_from(profiles, trainData, hyper);

    std::vector<int> fmax(profiles.numItems, -1);
    for (int i = 0; i < profiles.numItems; ++i)
        if (truth.M(i) > 0) fmax[i] = find_fmax(baseRows.row(i), truth.itemFeatures[i]);

    std::vector<RobustnessResult> results(ns.size());
    for (auto& r : results) r.outcome.assign(profiles.numItems, -1);

    auto record = [&](int item, const ItemMatrix& retrained) {
        for (std::size_t s = 0; s < ns.size(); ++s) {
            bool ok = in_top(retrained.row(item), fmax[item], ns[s] * truth.M(item));
            results[s].outcome[item] = ok ? 1 : 0;
        }
    };

    int eligible = 0;
    if (mode == RobMode::Batch) {
        ProfileMatrix removed = profiles;
        for (int i = 0; i < profiles.numItems; ++i)
            if (fmax[i] >= 0) removed.rows[profiles.numUsers + i].set(fmax[i], 0.0);
        auto retrained = train_from(removed, trainData, hyper);
        for (int i = 0; i < profiles.numItems; ++i) {
            if (fmax[i] < 0) continue;
            ++eligible;
            record(i, retrained);
        }
    } else {
        for (int i = 0; i < profiles.numItems; ++i) {
            if (fmax[i] < 0) continue;
            ++eligible;
            ProfileMatrix removed = profiles;
            removed.rows[profiles.numUsers + i].set(fmax[i], 0.0);
            record(i, train_from(removed, trainData, hyper));
        }
    }
    for (auto& r : results) {
        int successes = 0;
        for (int o : r.outcome)
            if (o == 1) ++successes;
        r.value = eligible > 0 ? static_cast<double>(successes) / eligible : 0.0;
    }
    return results;
}

RobustnessResult robustness_protocol(const Dataset& trainData, const ProfileMatrix& profiles,
                                     const ItemGroundTruth& truth, const BprHyper& hyper, int n,
                                     RobMode mode) {
    return robustness_sweep(trainData, profiles, truth, hyper, {n}, mode).front();
}

std::vector<ExplainRow> explain_item(int item, const ItemMatrix& itemRows,
                                     const ProfileMatrix& profiles, const FeatureTable& table,
                                     int K) {
    if (item < 0 || item >= itemRows.numItems)
        throw std::invalid_argument("explain_item: unknown item");
    std::vector<ExplainRow> rows;
    for (const auto& [f, val] : top_k(itemRows.row(item), static_cast<std::size_t>(K)))
        rows.push_back({f, val, profiles.itemRow(item).get(f), table.features[f]});
    return rows;
}

RecommendationEvidence explain_recommendation(int user, int item, const NeighborIndex& index,
                                              const ItemMatrix& itemRows,
                                              const std::vector<int>& trainItems, int K) {
    (void)user;
    if (std::binary_search(trainItems.begin(), trainItems.end(), item))
        throw std::invalid_argument("explain_recommendation: item is in the user's history");

    RecommendationEvidence ev;
    ev.score = knn_score(item, index, trainItems);
    for (const auto& [j, cs] : index.neighbors[item])
        if (std::binary_search(trainItems.begin(), trainItems.end(), j))
            ev.contributingNeighbors.emplace_back(j, cs);

    std::vector<std::pair<int, double>> products;
    auto vi = itemRows.row(item);
    for (int f = 0; f < itemRows.dimension; ++f) {
        double sum = 0.0;
        for (const auto& [j, cs] : ev.contributingNeighbors) sum += vi[f] * itemRows.row(j)[f];
        if (sum != 0.0) products.emplace_back(f, sum);
    }
    std::sort(products.begin(), products.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(products.size()) > K) products.resize(K);
    ev.sharedFeatures = std::move(products);
    return ev;
}

std::string format_explain_table(const std::vector<ExplainRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "kaHFM" << std::setw(12) << "TF-IDF"
        << std::setw(40) << "Predicate" << "Object\n";
    for (const auto& r : rows) {
        std::ostringstream a, b;
        a << std::fixed << std::setprecision(4) << r.trainedWeight;
        b << std::fixed << std::setprecision(4) << r.tfidfWeight;
        out << std::left << std::setw(12) << a.str() << std::setw(12) << b.str()
            << std::setw(40) << r.feature.predicate << r.feature.object << "\n";
    }
    return out.str();
}

}  // namespace kahfm
