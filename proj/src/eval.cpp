#include "kahfm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kahfm/rng.hpp"

namespace kahfm {

void SplitConfig::validate() const {
    if (ratio <= 0.0 || ratio >= 1.0)
        throw std::invalid_argument("split ratio must be in (0,1)");
}

Split holdout_split(const Dataset& dataset, const SplitConfig& config) {
    config.validate();
    std::vector<std::vector<Interaction>> byUser(dataset.numUsers);
    for (const auto& t : dataset.interactions) byUser[t.user].push_back(t);

    Split split;
    for (Dataset* d : {&split.train, &split.test}) {
        d->numUsers = dataset.numUsers;
        d->numItems = dataset.numItems;
        d->userIds = dataset.userIds;
        d->itemIds = dataset.itemIds;
        d->userIndex = dataset.userIndex;
        d->itemIndex = dataset.itemIndex;
    }

    for (int u = 0; u < dataset.numUsers; ++u) {
        auto& list = byUser[u];
        if (list.empty()) continue;
        bool haveTimestamps =
            std::all_of(list.begin(), list.end(), [](const auto& t) { return t.timestamp.has_value(); });
        if (config.temporal && haveTimestamps) {
            std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
                if (*a.timestamp != *b.timestamp) return *a.timestamp < *b.timestamp;
                return a.item < b.item;
            });
        } else {
            // sort first so the shuffle is independent of input file order
            std::sort(list.begin(), list.end(),
                      [](const auto& a, const auto& b) { return a.item < b.item; });
            Rng rng(derive_seed(config.seed, "holdout_split", static_cast<std::uint64_t>(u)));
            rng.shuffle(list);
        }
        std::size_t trainCount =
            static_cast<std::size_t>(std::ceil(config.ratio * list.size()));
        if (list.size() == 1) trainCount = 1;
        for (std::size_t idx = 0; idx < list.size(); ++idx)
            (idx < trainCount ? split.train : split.test).interactions.push_back(list[idx]);
    }
    return split;
}

std::vector<std::vector<int>> relevant_test_items(const Dataset& test,
                                                  std::optional<double> threshold) {
    std::vector<std::vector<int>> relevant(test.numUsers);
    for (const auto& t : test.interactions) {
        if (threshold && t.rating && *t.rating < *threshold) continue;
        relevant[t.user].push_back(t.item);
    }
    for (auto& v : relevant) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return relevant;
}

double precision_at(const std::vector<std::pair<int, double>>& recs,
                    const std::vector<int>& relevantTest, int N) {
    int hits = 0;
    int upTo = std::min<int>(N, static_cast<int>(recs.size()));
    for (int r = 0; r < upTo; ++r)
        if (std::binary_search(relevantTest.begin(), relevantTest.end(), recs[r].first)) ++hits;
    return static_cast<double>(hits) / N;
}

double ndcg_at(const std::vector<std::pair<int, double>>& recs,
               const std::vector<int>& relevantTest, int N) {
    if (relevantTest.empty()) return 0.0;
    double dcg = 0.0;
    int upTo = std::min<int>(N, static_cast<int>(recs.size()));
    for (int r = 0; r < upTo; ++r)
        if (std::binary_search(relevantTest.begin(), relevantTest.end(), recs[r].first))
            dcg += 1.0 / std::log2(r + 2.0);
    double idcg = 0.0;
    int ideal = std::min<int>(N, static_cast<int>(relevantTest.size()));
    for (int r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(r + 2.0);
    return dcg / idcg;
}

EvalReport evaluate_lists(const RecLists& recs, const Dataset& test,
                          std::optional<double> relevanceThreshold, int N) {
    auto relevant = relevant_test_items(test, relevanceThreshold);
    EvalReport report;
    report.cutoff = N;
    double sumP = 0.0, sumN = 0.0;
    for (int u = 0; u < test.numUsers; ++u) {
        if (relevant[u].empty()) continue;
        sumP += precision_at(recs[u], relevant[u], N);
        sumN += ndcg_at(recs[u], relevant[u], N);
        ++report.usersEvaluated;
    }
    if (report.usersEvaluated > 0) {
        report.precision = sumP / report.usersEvaluated;
        report.ndcg = sumN / report.usersEvaluated;
    }
    return report;
}

std::string EvalReport::to_text() const {
    std::ostringstream out;
    out.precision(6);
    out << "precision@" << cutoff << " = " << precision << "\n";
    out << "ndcg@" << cutoff << " = " << ndcg << "\n";
    out << "users_evaluated = " << usersEvaluated << "\n";
    for (const auto& [k, v] : config) out << k << " = " << v << "\n";
    return out.str();
}

std::string EvalReport::to_tsv() const {
    std::ostringstream out;
    out.precision(6);
    out << "metric\tcutoff\tvalue\n";
    out << "precision\t" << cutoff << "\t" << precision << "\n";
    out << "ndcg\t" << cutoff << "\t" << ndcg << "\n";
    return out.str();
}

}  // namespace kahfm
