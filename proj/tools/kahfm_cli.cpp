#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kahfm/config.hpp"
#include "kahfm/pipeline.hpp"
#include "kahfm/rng.hpp"

namespace fs = std::filesystem;
using namespace kahfm;

namespace {

struct CliOpts {
    PipelineOptions p;
    std::string configPath;
    std::string outDir = ".";
    std::string modelPath;
    std::string settingStr = "cs";
    std::string splitStr = "random";
    std::string formatStr = "tsv";
    std::string saModeStr = "per-item";
    std::string robModeStr = "batch";
    std::string userExt;
    std::string itemExt;
    double relevanceThreshold = -1.0;  // <0 means unset
    int explainK = 10;
    bool exportProfiles = false;
};

void apply_config(const std::map<std::string, std::string>& cfg, CliOpts& o) {
    auto get = [&](const std::string& key, auto&& fn) {
        auto it = cfg.find(key);
        if (it != cfg.end()) fn(it->second);
    };
    get("seed", [&](const std::string& v) { o.p.seed = std::stoull(v); });
    get("ingest.interactions", [&](const std::string& v) { o.p.interactionsPath = v; });
    get("ingest.triples", [&](const std::string& v) { o.p.triplesPath = v; });
    get("ingest.mapping", [&](const std::string& v) { o.p.mappingPath = v; });
    get("ingest.format", [&](const std::string& v) { o.formatStr = v; });
    get("ingest.setting", [&](const std::string& v) { o.settingStr = v; });
    get("ingest.threshold", [&](const std::string& v) { o.p.missingThreshold = std::stod(v); });
    get("split.mode", [&](const std::string& v) { o.splitStr = v; });
    get("split.relevance_threshold",
        [&](const std::string& v) { o.relevanceThreshold = std::stod(v); });
    get("bpr.learning_rate", [&](const std::string& v) { o.p.hyper.learningRate = std::stod(v); });
    get("bpr.bias_reg", [&](const std::string& v) { o.p.hyper.biasReg = std::stod(v); });
    get("bpr.user_reg", [&](const std::string& v) { o.p.hyper.userReg = std::stod(v); });
    get("bpr.pos_item_reg", [&](const std::string& v) { o.p.hyper.posItemReg = std::stod(v); });
    get("bpr.neg_item_reg", [&](const std::string& v) { o.p.hyper.negItemReg = std::stod(v); });
    get("bpr.iterations", [&](const std::string& v) { o.p.hyper.iterations = std::stoi(v); });
    get("bpr.freeze_user_factors",
        [&](const std::string& v) { o.p.hyper.freezeUserFactors = (v == "true" || v == "1"); });
    get("knn.k", [&](const std::string& v) { o.p.knn = std::stoi(v); });
    get("eval.topn", [&](const std::string& v) { o.p.topn = std::stoi(v); });
    get("sa.mode", [&](const std::string& v) { o.saModeStr = v; });
    get("rob.mode", [&](const std::string& v) { o.robModeStr = v; });
    get("system", [&](const std::string& v) { o.p.system = v; });
}

void finalize(CliOpts& o) {
    o.p.setting = parse_setting(o.settingStr);
    if (o.splitStr == "temporal")
        o.p.temporalSplit = true;
    else if (o.splitStr != "random")
        throw std::invalid_argument("--split must be random or temporal");
    if (o.formatStr == "tsv")
        o.p.triplesFormat = TripleFormat::Tsv;
    else if (o.formatStr == "ntriples")
        o.p.triplesFormat = TripleFormat::NTriples;
    else
        throw std::invalid_argument("--triples-format must be tsv or ntriples");
    if (o.relevanceThreshold >= 0.0) o.p.relevanceThreshold = o.relevanceThreshold;
    if (o.saModeStr == "per-item") {
        o.p.saMode = {};
    } else if (o.saModeStr.rfind("fixed:", 0) == 0) {
        o.p.saMode.fixedM = std::stoi(o.saModeStr.substr(6));
    } else {
        throw std::invalid_argument("--sa-mode must be per-item or fixed:K");
    }
    if (o.robModeStr == "batch")
        o.p.robMode = RobMode::Batch;
    else if (o.robModeStr == "per-item")
        o.p.robMode = RobMode::PerItem;
    else
        throw std::invalid_argument("--rob-mode must be batch or per-item");
}

void add_common(CLI::App* cmd, CliOpts& o) {
    cmd->add_option("--config", o.configPath, "flat key = value config file");
    cmd->add_option("--interactions", o.p.interactionsPath, "interactions TSV");
    cmd->add_option("--triples", o.p.triplesPath, "triples file");
    cmd->add_option("--mapping", o.p.mappingPath, "item_id \\t item_iri mapping TSV");
    cmd->add_option("--triples-format", o.formatStr, "tsv|ntriples");
    cmd->add_option("--setting", o.settingStr, "cs|os|fs");
    cmd->add_option("--threshold", o.p.missingThreshold, "max missing-value percentage");
    cmd->add_option("--iterations", o.p.hyper.iterations, "BPR epochs");
    cmd->add_option("--knn", o.p.knn, "neighborhood size");
    cmd->add_option("--seed", o.p.seed, "top-level seed");
    cmd->add_option("--split", o.splitStr, "random|temporal");
    cmd->add_option("--relevance-threshold", o.relevanceThreshold, "relevant-rating cutoff");
    cmd->add_option("--rob-mode", o.robModeStr, "batch|per-item");
    cmd->add_option("--sa-mode", o.saModeStr, "per-item|fixed:K");
    cmd->add_flag("--freeze-user-factors", o.p.hyper.freezeUserFactors,
                  "keep user rows at their profile initialization");
    cmd->add_option("--system", o.p.system,
                    "kahfm|bprfm|mostpop|itemknn|userknn|vsm|abitemknn");
    cmd->add_option("--topn", o.p.topn, "recommendation list length");
    cmd->add_option("--out", o.outDir, "output directory");
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string format6(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

int lookup_item(const Dataset& ds, const std::string& ext) {
    auto it = ds.itemIndex.find(ext);
    if (it == ds.itemIndex.end()) throw std::runtime_error("unknown item '" + ext + "'");
    return it->second;
}

int lookup_user(const Dataset& ds, const std::string& ext) {
    auto it = ds.userIndex.find(ext);
    if (it == ds.userIndex.end()) throw std::runtime_error("unknown user '" + ext + "'");
    return it->second;
}

FMParams obtain_params(const Prepared& prep, const CliOpts& o) {
    if (!o.modelPath.empty()) {
        auto loaded = load_model(o.modelPath);
        if (loaded.params.n != prep.dataset.numUsers + prep.dataset.numItems)
            throw std::runtime_error("model does not match the dataset (n differs)");
        return std::move(loaded.params);
    }
    return train_model(prep, o.p).params;
}

std::string recs_tsv(const RecLists& recs, const Dataset& ds) {
    std::ostringstream out;
    out.precision(6);
    out << "user\trank\titem\tscore\n";
    for (int u = 0; u < ds.numUsers; ++u) {
        int rank = 1;
        for (const auto& [item, score] : recs[u])
            out << ds.userIds[u] << "\t" << rank++ << "\t" << ds.itemIds[item] << "\t" << score
                << "\n";
    }
    return out.str();
}

int cmd_stats(const CliOpts& o) {
    Dataset ds = load_interactions(o.p.interactionsPath);
    FeatureStore store;
    store.itemFeatures.resize(ds.numItems);
    if (!o.p.triplesPath.empty())
        store = load_triples(o.p.triplesPath, o.p.triplesFormat, ds, o.p.mappingPath);
    Stats s = dataset_stats(ds, store);
    std::cout << "users = " << s.users << "\n"
              << "items = " << s.items << "\n"
              << "transactions = " << s.transactions << "\n"
              << "features = " << s.features << "\n"
              << "sparsity_percent = " << format6(s.sparsityPercent) << "\n";
    if (store.skippedTriples > 0)
        std::cout << "skipped_triples = " << store.skippedTriples << "\n";
    return 0;
}

int cmd_prepare(const CliOpts& o) {
    Prepared prep = prepare(o.p);
    Stats s = dataset_stats(prep.dataset, prep.store);
    std::cout << "users = " << s.users << "\n"
              << "items = " << s.items << "\n"
              << "transactions = " << s.transactions << "\n"
              << "retained_features = " << prep.table.size() << "\n"
              << "sparsity_percent = " << format6(s.sparsityPercent) << "\n"
              << "feature_average = " << format6(prep.truth.featureAverage()) << "\n";
    if (prep.skippedTriples > 0)
        std::cout << "skipped_triples = " << prep.skippedTriples << "\n";

    std::ostringstream feats;
    feats << "feature_id\tpredicate\tobject\tdf\n";
    for (std::size_t f = 0; f < prep.table.size(); ++f) {
        const auto& feat = prep.table.features[f];
        feats << f << "\t" << feat.predicate << "\t" << feat.object << "\t"
              << prep.store.featureItemCount.at(feat) << "\n";
    }
    write_file(fs::path(o.outDir) / "features.tsv", feats.str());

    if (o.exportProfiles) {
        std::ostringstream rows;
        rows.precision(17);
        rows << "row_kind\tdense_id\tfeature_id\tvalue\n";
        for (int u = 0; u < prep.profiles.numUsers; ++u)
            for (const auto& [f, v] : prep.profiles.userRow(u).entries())
                rows << "user\t" << u << "\t" << f << "\t" << v << "\n";
        for (int i = 0; i < prep.profiles.numItems; ++i)
            for (const auto& [f, v] : prep.profiles.itemRow(i).entries())
                rows << "item\t" << i << "\t" << f << "\t" << v << "\n";
        write_file(fs::path(o.outDir) / "profiles.tsv", rows.str());
    }
    return 0;
}

int cmd_train(const CliOpts& o) {
    Prepared prep = prepare(o.p);
    TrainedModel model = train_model(prep, o.p);
    save_model(model.params, make_meta(prep, o.p), (fs::path(o.outDir) / "model.bin").string());

    std::ostringstream trace;
    trace.precision(10);
    trace << "epoch\tmean_loss\n";
    for (const auto& t : model.trace) trace << t.epoch << "\t" << t.meanLoss << "\n";
    write_file(fs::path(o.outDir) / "trace.tsv", trace.str());

    std::cout << "trained " << o.p.hyper.iterations << " epochs, k = " << model.params.k << "\n";
    if (!model.trace.empty())
        std::cout << "final_mean_loss = " << format6(model.trace.back().meanLoss) << "\n";
    return 0;
}

int cmd_recommend(const CliOpts& o) {
    Prepared prep = prepare(o.p);
    RecLists recs;
    if (!o.modelPath.empty()) {
        FMParams params = obtain_params(prep, o);
        recs = kahfm_lists(params, prep.split.train, o.p.knn, o.p.topn);
    } else {
        recs = run_system(prep, o.p);
    }
    write_file(fs::path(o.outDir) / "recommendations.tsv", recs_tsv(recs, prep.dataset));
    std::cout << "wrote recommendations for " << prep.dataset.numUsers << " users\n";
    return 0;
}

int cmd_evaluate(const CliOpts& o) {
    Prepared prep = prepare(o.p);
    RecLists recs = run_system(prep, o.p);
    auto threshold = effective_relevance_threshold(o.p, prep.dataset);
    EvalReport report = evaluate_lists(recs, prep.split.test, threshold, o.p.topn);

    std::ostringstream text;
    text << report.to_text() << o.p.fingerprint();
    write_file(fs::path(o.outDir) / "report.txt", text.str());
    write_file(fs::path(o.outDir) / "report.tsv", report.to_tsv());
    std::cout << "P@" << o.p.topn << " = " << format6(report.precision) << "\n"
              << "nDCG@" << o.p.topn << " = " << format6(report.ndcg) << "\n"
              << "users_evaluated = " << report.usersEvaluated << "\n";
    return 0;
}

int cmd_sa(const CliOpts& o) {
    Prepared prep = prepare(o.p);
    FMParams params = obtain_params(prep, o);
    auto items = ItemMatrix::from_params(params, prep.dataset.numUsers, prep.dataset.numItems);

    std::ostringstream out;
    for (int n = 1; n <= 5; ++n)
        out << "SA@" << n << "M = " << format6(semantic_accuracy(items, prep.truth, n, o.p.saMode))
            << "\n";
    out << "FA = " << format6(prep.truth.featureAverage()) << "\n";
    out << o.p.fingerprint();
    write_file(fs::path(o.outDir) / "sa.txt", out.str());
    std::cout << out.str();
    return 0;
}

int cmd_robustness(const CliOpts& o) {
    Prepared prep = prepare(o.p);
    BprHyper hyper = o.p.hyper;
    hyper.seed = derive_seed(o.p.seed, "bpr");
    auto results =
        robustness_sweep(prep.split.train, prep.profiles, prep.truth, hyper, {1, 2, 3, 4, 5},
                         o.p.robMode);
    std::ostringstream out;
    for (int n = 1; n <= 5; ++n)
        out << "1-Rob@" << n << "M = " << format6(results[n - 1].value) << "\n";
    out << "FA = " << format6(prep.truth.featureAverage()) << "\n";
    out << "rob_mode = " << (o.p.robMode == RobMode::Batch ? "batch" : "per-item") << "\n";
    out << o.p.fingerprint();
    write_file(fs::path(o.outDir) / "robustness.txt", out.str());
    std::cout << out.str();
    return 0;
}

int cmd_explain(const CliOpts& o) {
    if (o.itemExt.empty()) throw std::runtime_error("explain requires --item");
    Prepared prep = prepare(o.p);
    FMParams params = obtain_params(prep, o);
    auto items = ItemMatrix::from_params(params, prep.dataset.numUsers, prep.dataset.numItems);
    int item = lookup_item(prep.dataset, o.itemExt);

    if (o.userExt.empty()) {
        auto rows = explain_item(item, items, prep.profiles, prep.table, o.explainK);
        std::cout << format_explain_table(rows);
        return 0;
    }
    int user = lookup_user(prep.dataset, o.userExt);
    auto index = build_neighbors(items, o.p.knn);
    auto byUser = prep.split.train.userItems();
    auto ev = explain_recommendation(user, item, index, items, byUser[user], o.explainK);
    std::cout << "score = " << format6(ev.score) << "\n";
    std::cout << "contributing_neighbors:\n";
    for (const auto& [j, cs] : ev.contributingNeighbors)
        std::cout << "  " << prep.dataset.itemIds[j] << "\t" << format6(cs) << "\n";
    std::cout << "shared_features:\n";
    for (const auto& [f, v] : ev.sharedFeatures)
        std::cout << "  " << prep.table.features[f].predicate << "\t"
                  << prep.table.features[f].object << "\t" << format6(v) << "\n";
    if (ev.contributingNeighbors.empty()) std::cout << "  (no evidence; score 0)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-aware hybrid factorization machine toolkit"};
    app.require_subcommand(1);

    CliOpts o;
    // config file first, flags override
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            apply_config(parse_config(argv[i + 1]), o);
            break;
        }
    }

    auto* stats = app.add_subcommand("stats", "dataset and feature statistics");
    auto* prepareCmd = app.add_subcommand("prepare", "ingest + filter + profiles");
    auto* trainCmd = app.add_subcommand("train", "initialize and train a model");
    auto* recommend = app.add_subcommand("recommend", "write Top-N lists");
    auto* evaluate = app.add_subcommand("evaluate", "accuracy metrics on the hold-out split");
    auto* sa = app.add_subcommand("sa", "semantic accuracy of the trained item vectors");
    auto* robustness = app.add_subcommand("robustness", "feature-removal robustness protocol");
    auto* explainCmd = app.add_subcommand("explain", "feature-level explanations");

    for (auto* cmd : {stats, prepareCmd, trainCmd, recommend, evaluate, sa, robustness, explainCmd})
        add_common(cmd, o);
    prepareCmd->add_flag("--export-profiles", o.exportProfiles, "write profiles.tsv");
    for (auto* cmd : {recommend, sa, explainCmd})
        cmd->add_option("--model", o.modelPath, "load a saved model instead of training");
    explainCmd->add_option("--user", o.userExt, "external user id");
    explainCmd->add_option("--item", o.itemExt, "external item id");
    explainCmd->add_option("--top", o.explainK, "features to show");

    CLI11_PARSE(app, argc, argv);

    try {
        finalize(o);
        if (o.p.interactionsPath.empty())
            throw std::runtime_error("missing --interactions (or ingest.interactions in config)");
        if (stats->parsed()) return cmd_stats(o);
        if (prepareCmd->parsed()) return cmd_prepare(o);
        if (trainCmd->parsed()) return cmd_train(o);
        if (recommend->parsed()) return cmd_recommend(o);
        if (evaluate->parsed()) return cmd_evaluate(o);
        if (sa->parsed()) return cmd_sa(o);
        if (robustness->parsed()) return cmd_robustness(o);
        if (explainCmd->parsed()) return cmd_explain(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
