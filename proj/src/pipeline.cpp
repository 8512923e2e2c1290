#include "kahfm/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "kahfm/rng.hpp"

namespace kahfm {

namespace {

std::string setting_name(SettingKind s) {
    switch (s) {
        case SettingKind::Categorical: return "cs";
        case SettingKind::Ontological: return "os";
        case SettingKind::Factual: return "fs";
    }
    return "?";
}

}  // namespace

std::string PipelineOptions::fingerprint() const {
    std::ostringstream out;
    out << "setting = " << setting_name(setting) << "\n";
    out << "threshold = " << missingThreshold << "\n";
    out << "split = " << (temporalSplit ? "temporal" : "random") << "\n";
    out << "iterations = " << hyper.iterations << "\n";
    out << "learning_rate = " << hyper.learningRate << "\n";
    out << "knn = " << knn << "\n";
    out << "system = " << system << "\n";
    out << "seed = " << seed << "\n";
    if (hyper.freezeUserFactors) out << "freeze_user_factors = true\n";
    return out.str();
}

std::optional<double> effective_relevance_threshold(const PipelineOptions& opts,
                                                    const Dataset& dataset) {
    if (opts.relevanceThreshold) return opts.relevanceThreshold;
    bool haveRatings = std::any_of(dataset.interactions.begin(), dataset.interactions.end(),
                                   [](const auto& t) { return t.rating.has_value(); });
    if (haveRatings) return 4.0;
    return std::nullopt;
}

Prepared prepare(const PipelineOptions& opts) {
    Prepared prep;
    prep.dataset = load_interactions(opts.interactionsPath);

    FeatureStore raw;
    raw.itemFeatures.resize(prep.dataset.numItems);
    if (!opts.triplesPath.empty())
        raw = load_triples(opts.triplesPath, opts.triplesFormat, prep.dataset, opts.mappingPath);
    prep.skippedTriples = raw.skippedTriples;

    auto selected = select_setting(exclude_noisy(raw), opts.setting);
    prep.table = filter_by_missing(selected, opts.missingThreshold, prep.dataset.numItems);
    prep.store = restrict_to(selected, prep.table);

    SplitConfig sc;
    sc.temporal = opts.temporalSplit;
    sc.seed = derive_seed(opts.seed, "split");
    sc.relevanceThreshold = effective_relevance_threshold(opts, prep.dataset);
    prep.split = holdout_split(prep.dataset, sc);

    prep.profiles = build_profile_matrix(prep.split.train, prep.store, prep.table);
    prep.truth = ItemGroundTruth::from_store(prep.store, prep.table);
    return prep;
}

TrainedModel train_model(const Prepared& prep, const PipelineOptions& opts) {
    TrainedModel tm;
    BprHyper hyper = opts.hyper;
    hyper.seed = derive_seed(opts.seed, "bpr");
    if (opts.system == "bprfm") {
        tm.params = init_random(prep.dataset.numUsers + prep.dataset.numItems,
                                static_cast<int>(prep.table.size()),
                                derive_seed(opts.seed, "bprfm_init"), opts.randomInitScale);
    } else {
        tm.params = init_kahfm(prep.profiles);
    }
    tm.trace = train(tm.params, prep.split.train, hyper);
    return tm;
}

RecLists kahfm_lists(const FMParams& params, const Dataset& trainData, int k_nn, int N) {
    auto items = ItemMatrix::from_params(params, trainData.numUsers, trainData.numItems);
    auto index = build_neighbors(items, k_nn);
    auto byUser = trainData.userItems();
    RecLists recs(trainData.numUsers);
    for (int u = 0; u < trainData.numUsers; ++u)
        recs[u] = recommend_topn(u, N, index, byUser[u], trainData.numItems);
    return recs;
}

RecLists run_system(const Prepared& prep, const PipelineOptions& opts) {
    const Dataset& trainData = prep.split.train;
    BprHyper hyper = opts.hyper;
    hyper.seed = derive_seed(opts.seed, "bpr");

    if (opts.system == "kahfm") {
        auto model = train_model(prep, opts);
        return kahfm_lists(model.params, trainData, opts.knn, opts.topn);
    }
    if (opts.system == "bprfm") {
        return bprfm_random(trainData, hyper, static_cast<int>(prep.table.size()), opts.topn,
                            opts.randomInitScale);
    }
    if (opts.system == "mostpop") return most_popular(trainData, opts.topn);
    if (opts.system == "itemknn") return itemknn_pearson(trainData, opts.knn, opts.topn);
    if (opts.system == "userknn") return userknn_pearson(trainData, opts.knn, opts.topn);
    if (opts.system == "vsm")
        return vsm_recommend(prep.profiles, trainData, VsmVariant::UserProfileCosine, opts.knn,
                             opts.topn);
    if (opts.system == "abitemknn")
        return vsm_recommend(prep.profiles, trainData, VsmVariant::AbItemKnn, opts.knn,
                             opts.topn);
    throw std::invalid_argument("unknown system '" + opts.system + "'");
}

ModelMeta make_meta(const Prepared& prep, const PipelineOptions& opts) {
    ModelMeta meta;
    meta.table = prep.table;
    meta.userIds = prep.dataset.userIds;
    meta.itemIds = prep.dataset.itemIds;
    meta.fingerprint = opts.fingerprint();
    return meta;
}

}  // namespace kahfm
