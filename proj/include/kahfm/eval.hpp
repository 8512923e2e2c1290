#pragma once

#include <map>
#include <optional>

#include "kahfm/baselines.hpp"
#include "kahfm/core.hpp"

namespace kahfm {

struct SplitConfig {
    double ratio = 0.8;  // train fraction
    bool temporal = false;
    std::uint64_t seed = 42;
    std::optional<double> relevanceThreshold = 4.0;

    void validate() const;
};

struct Split {
    Dataset train;
    Dataset test;
};

/// Per-user hold-out: temporal keeps the earliest ceil(ratio*count)
/// interactions (ties by item id) in train, otherwise a seeded random
/// subset. Single-interaction users stay entirely in train.
Split holdout_split(const Dataset& dataset, const SplitConfig& config);

/// Test items counting as relevant: rating >= threshold, or every test
/// item when ratings are absent or no threshold is set.
std::vector<std::vector<int>> relevant_test_items(const Dataset& test,
                                                  std::optional<double> threshold);

double precision_at(const std::vector<std::pair<int, double>>& recs,
                    const std::vector<int>& relevantTest, int N);

/// Binary-gain nDCG with IDCG over min(N, |relevant|) ideal hits.
double ndcg_at(const std::vector<std::pair<int, double>>& recs,
               const std::vector<int>& relevantTest, int N);

struct EvalReport {
    double precision = 0.0;
    double ndcg = 0.0;
    int usersEvaluated = 0;
    int cutoff = 0;
    std::map<std::string, std::string> config;  // run fingerprint

    std::string to_text() const;
    std::string to_tsv() const;
};

/// Averages over users with at least one relevant test item.
EvalReport evaluate_lists(const RecLists& recs, const Dataset& test,
                          std::optional<double> relevanceThreshold, int N);

}  // namespace kahfm
