#pragma once

#include <string>

#include "kahfm/baselines.hpp"
#include "kahfm/eval.hpp"
#include "kahfm/ingest.hpp"
#include "kahfm/interpret.hpp"
#include "kahfm/model_io.hpp"

namespace kahfm {

/// One bundle of settings shared by every command; each component derives
/// its random stream from the single top-level seed.
struct PipelineOptions {
    std::string interactionsPath;
    std::string triplesPath;
    std::string mappingPath;
    TripleFormat triplesFormat = TripleFormat::Tsv;

    SettingKind setting = SettingKind::Categorical;
    double missingThreshold = 100.0;

    bool temporalSplit = false;
    std::optional<double> relevanceThreshold;  // default applied when ratings exist

    BprHyper hyper;
    int knn = 40;
    int topn = 10;
    std::string system = "kahfm";
    double randomInitScale = 0.1;

    SaMode saMode;
    RobMode robMode = RobMode::Batch;

    std::uint64_t seed = 42;

    std::string fingerprint() const;
};

/// Everything downstream commands need: ingest + setting selection +
/// filtering + split + profiles, all deterministic in (inputs, seed).
struct Prepared {
    Dataset dataset;
    Split split;
    FeatureStore store;  // restricted to the retained features
    FeatureTable table;
    ProfileMatrix profiles;  // built on the training split
    ItemGroundTruth truth;
    int skippedTriples = 0;
};

Prepared prepare(const PipelineOptions& opts);

struct TrainedModel {
    FMParams params;
    std::vector<EpochTrace> trace;
};

/// kaHFM initialization + BPR, or random init for system "bprfm".
TrainedModel train_model(const Prepared& prep, const PipelineOptions& opts);

/// Recommendation lists for any supported system name.
RecLists run_system(const Prepared& prep, const PipelineOptions& opts);

/// Lists for an already-trained kaHFM model (Item-kNN over item rows).
RecLists kahfm_lists(const FMParams& params, const Dataset& trainData, int k_nn, int N);

std::optional<double> effective_relevance_threshold(const PipelineOptions& opts,
                                                    const Dataset& dataset);

ModelMeta make_meta(const Prepared& prep, const PipelineOptions& opts);

}  // namespace kahfm
