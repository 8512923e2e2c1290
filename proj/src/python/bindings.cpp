#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kahfm/pipeline.hpp"
#include "kahfm/rng.hpp"

namespace py = pybind11;
using namespace kahfm;

PYBIND11_MODULE(_kahfm, m) {
    m.doc() = "knowledge-aware hybrid factorization machine core";

    py::class_<Feature>(m, "Feature")
        .def(py::init<std::string, std::string>())
        .def_readonly("predicate", &Feature::predicate)
        .def_readonly("object", &Feature::object)
        .def("__repr__", [](const Feature& f) {
            return "Feature(" + f.predicate + ", " + f.object + ")";
        });

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("num_users", &Dataset::numUsers)
        .def_readonly("num_items", &Dataset::numItems)
        .def_readonly("user_ids", &Dataset::userIds)
        .def_readonly("item_ids", &Dataset::itemIds)
        .def_property_readonly("num_interactions",
                               [](const Dataset& d) { return d.interactions.size(); })
        .def("user_items", &Dataset::userItems);

    py::class_<FeatureTable>(m, "FeatureTable")
        .def("__len__", &FeatureTable::size)
        .def("feature", [](const FeatureTable& t, int id) { return t.features.at(id); })
        .def("id_of", &FeatureTable::idOf);

    py::class_<Split>(m, "Split")
        .def_readonly("train", &Split::train)
        .def_readonly("test", &Split::test);

    py::class_<FMParams>(m, "FMParams")
        .def_readonly("n", &FMParams::n)
        .def_readonly("k", &FMParams::k)
        .def_readonly("w0", &FMParams::w0)
        .def("item_row", [](const FMParams& p, int item, int numUsers) {
            auto r = p.itemRow(item, numUsers);
            return std::vector<double>(r.begin(), r.end());
        });

    py::class_<EpochTrace>(m, "EpochTrace")
        .def_readonly("epoch", &EpochTrace::epoch)
        .def_readonly("mean_loss", &EpochTrace::meanLoss);

    py::class_<BprHyper>(m, "BprHyper")
        .def(py::init<>())
        .def_readwrite("learning_rate", &BprHyper::learningRate)
        .def_readwrite("bias_reg", &BprHyper::biasReg)
        .def_readwrite("user_reg", &BprHyper::userReg)
        .def_readwrite("pos_item_reg", &BprHyper::posItemReg)
        .def_readwrite("neg_item_reg", &BprHyper::negItemReg)
        .def_readwrite("iterations", &BprHyper::iterations)
        .def_readwrite("seed", &BprHyper::seed)
        .def_readwrite("freeze_user_factors", &BprHyper::freezeUserFactors);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("precision", &EvalReport::precision)
        .def_readonly("ndcg", &EvalReport::ndcg)
        .def_readonly("users_evaluated", &EvalReport::usersEvaluated)
        .def("to_text", &EvalReport::to_text);

    py::class_<PipelineOptions>(m, "PipelineOptions")
        .def(py::init<>())
        .def_readwrite("interactions_path", &PipelineOptions::interactionsPath)
        .def_readwrite("triples_path", &PipelineOptions::triplesPath)
        .def_readwrite("mapping_path", &PipelineOptions::mappingPath)
        .def_readwrite("missing_threshold", &PipelineOptions::missingThreshold)
        .def_readwrite("temporal_split", &PipelineOptions::temporalSplit)
        .def_readwrite("hyper", &PipelineOptions::hyper)
        .def_readwrite("knn", &PipelineOptions::knn)
        .def_readwrite("topn", &PipelineOptions::topn)
        .def_readwrite("system", &PipelineOptions::system)
        .def_readwrite("seed", &PipelineOptions::seed)
        .def_property(
            "setting",
            [](const PipelineOptions& o) {
                switch (o.setting) {
                    case SettingKind::Categorical: return "cs";
                    case SettingKind::Ontological: return "os";
                    default: return "fs";
                }
            },
            [](PipelineOptions& o, const std::string& s) { o.setting = parse_setting(s); })
        .def("fingerprint", &PipelineOptions::fingerprint);

    py::class_<Prepared>(m, "Prepared")
        .def_readonly("dataset", &Prepared::dataset)
        .def_readonly("split", &Prepared::split)
        .def_readonly("table", &Prepared::table)
        .def_property_readonly("feature_average",
                               [](const Prepared& p) { return p.truth.featureAverage(); });

    py::class_<TrainedModel>(m, "TrainedModel")
        .def_readonly("params", &TrainedModel::params)
        .def_readonly("trace", &TrainedModel::trace);

    m.def("load_interactions", &load_interactions, py::arg("path"));
    m.def("prepare", &prepare, py::arg("options"));
    m.def("train_model", &train_model, py::arg("prepared"), py::arg("options"));
    m.def("run_system", &run_system, py::arg("prepared"), py::arg("options"),
          "per-user ranked (item, score) lists for the configured system");
    m.def(
        "evaluate",
        [](const Prepared& prep, const PipelineOptions& opts) {
            auto recs = run_system(prep, opts);
            return evaluate_lists(recs, prep.split.test,
                                  effective_relevance_threshold(opts, prep.dataset), opts.topn);
        },
        py::arg("prepared"), py::arg("options"));
    m.def(
        "semantic_accuracy",
        [](const Prepared& prep, const PipelineOptions& opts, const TrainedModel& model, int n) {
            auto items = ItemMatrix::from_params(model.params, prep.dataset.numUsers,
                                                 prep.dataset.numItems);
            return semantic_accuracy(items, prep.truth, n, opts.saMode);
        },
        py::arg("prepared"), py::arg("options"), py::arg("model"), py::arg("n") = 1);
    m.def(
        "robustness",
        [](const Prepared& prep, const PipelineOptions& opts, int n) {
            BprHyper hyper = opts.hyper;
            hyper.seed = derive_seed(opts.seed, "bpr");
            return robustness_protocol(prep.split.train, prep.profiles, prep.truth, hyper, n,
                                       opts.robMode)
                .value;
        },
        py::arg("prepared"), py::arg("options"), py::arg("n") = 1);
    m.def("save_model",
          [](const TrainedModel& model, const Prepared& prep, const PipelineOptions& opts,
             const std::string& path) { save_model(model.params, make_meta(prep, opts), path); });
}
