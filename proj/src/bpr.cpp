#include "kahfm/bpr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kahfm/rng.hpp"

namespace kahfm {

void BprHyper::validate() const {
    if (learningRate <= 0.0) throw std::invalid_argument("learning rate must be > 0");
    if (biasReg < 0.0 || userReg < 0.0 || posItemReg < 0.0 || negItemReg < 0.0)
        throw std::invalid_argument("regularizations must be >= 0");
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
}

std::vector<BprTriple> sample_epoch(const Dataset& trainData, std::uint64_t seed, int epochIndex,
                                    int* skippedUsers) {
    auto byUser = trainData.userItems();
    std::vector<bool> fullUser(trainData.numUsers, false);
    int skipped = 0;
    for (int u = 0; u < trainData.numUsers; ++u) {
        if (static_cast<int>(byUser[u].size()) == trainData.numItems) {
            fullUser[u] = true;
            ++skipped;
        }
    }
    if (skippedUsers) *skippedUsers = skipped;

    std::vector<std::pair<int, int>> positives;
    positives.reserve(trainData.interactions.size());
    for (int u = 0; u < trainData.numUsers; ++u) {
        if (fullUser[u]) continue;
        for (int i : byUser[u]) positives.emplace_back(u, i);
    }

    Rng rng(derive_seed(seed, "sample_epoch", static_cast<std::uint64_t>(epochIndex)));
    rng.shuffle(positives);

    std::vector<BprTriple> triples;
    triples.reserve(positives.size());
    for (const auto& [u, i] : positives) {
        const auto& owned = byUser[u];
        int j;
        do {
            j = static_cast<int>(rng.below(trainData.numItems));
        } while (std::binary_search(owned.begin(), owned.end(), j));
        triples.push_back({u, i, j});
    }
    return triples;
}

namespace {

double softplus(double x) {
    // -ln sigma(-x) evaluated stably
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

double bpr_step(FMParams& params, int numUsers, const BprTriple& t, const BprHyper& hyper) {
    const double eta = hyper.learningRate;
    const int posVar = numUsers + t.posItem;
    const int negVar = numUsers + t.negItem;

    auto vu = params.row(t.user);
    auto vi = params.row(posVar);
    auto vj = params.row(negVar);

    // d = score(u,i) - score(u,j); w0 and w_u cancel
    double d = params.w[posVar] - params.w[negVar] + dot(vu, vi) - dot(vu, vj);
    if (!std::isfinite(d))
        throw std::runtime_error("bpr_step: non-finite pairwise difference (learning rate too high?)");
    const double g = 1.0 / (1.0 + std::exp(d));

    params.w[posVar] += eta * (g - hyper.biasReg * params.w[posVar]);
    params.w[negVar] += eta * (-g - hyper.biasReg * params.w[negVar]);

    // gradients are taken at the pre-update parameters
    std::vector<double> vuOld(vu.begin(), vu.end());
    if (!hyper.freezeUserFactors) {
        for (int f = 0; f < params.k; ++f)
            vu[f] += eta * (g * (vi[f] - vj[f]) - hyper.userReg * vuOld[f]);
    }
    for (int f = 0; f < params.k; ++f) {
        vi[f] += eta * (g * vuOld[f] - hyper.posItemReg * vi[f]);
        vj[f] += eta * (-g * vuOld[f] - hyper.negItemReg * vj[f]);
    }
    return softplus(-d);
}

std::vector<EpochTrace> train(FMParams& params, const Dataset& trainData, const BprHyper& hyper) {
    hyper.validate();
    std::vector<EpochTrace> trace;
    trace.reserve(hyper.iterations);
    for (int epoch = 0; epoch < hyper.iterations; ++epoch) {
        auto triples = sample_epoch(trainData, hyper.seed, epoch);
        double lossSum = 0.0;
        for (const auto& t : triples)
            lossSum += bpr_step(params, trainData.numUsers, t, hyper);
        trace.push_back({epoch, triples.empty() ? 0.0 : lossSum / triples.size()});
    }
    return trace;
}

}  // namespace kahfm
