#pragma once

#include "kahfm/core.hpp"
#include "kahfm/fm.hpp"

namespace kahfm {

struct BprHyper {
    double learningRate = 0.05;
    double biasReg = 0.0;
    double userReg = 0.0025;
    double posItemReg = 0.0025;
    double negItemReg = 0.00025;
    int iterations = 30;
    std::uint64_t seed = 42;
    bool freezeUserFactors = false;

    void validate() const;
};

struct BprTriple {
    int user;
    int posItem;
    int negItem;
};

struct EpochTrace {
    int epoch;
    double meanLoss;  // mean -ln sigma(d) over the epoch
};

/// One epoch visits every training positive exactly once in a seeded
/// permutation; negatives are fresh uniform draws from items outside I^u.
/// Users who interacted with the whole catalog are skipped.
std::vector<BprTriple> sample_epoch(const Dataset& trainData, std::uint64_t seed, int epochIndex,
                                    int* skippedUsers = nullptr);

/// Single SGD update; returns -ln sigma(d) at the pre-update parameters.
/// w0 and w_u cancel out of d, so they receive no update.
double bpr_step(FMParams& params, int numUsers, const BprTriple& t, const BprHyper& hyper);

/// Runs hyper.iterations epochs; iterations = 0 leaves params untouched.
std::vector<EpochTrace> train(FMParams& params, const Dataset& trainData, const BprHyper& hyper);

}  // namespace kahfm
