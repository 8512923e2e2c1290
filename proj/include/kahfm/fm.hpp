#pragma once

#include "kahfm/core.hpp"
#include "kahfm/profiles.hpp"

namespace kahfm {

/// Order-2 FM score over an arbitrary sparse input vector:
/// w0 + sum_j w_j x_j + sum_{j<p} x_j x_p <V[j], V[p]>.
double fm_score_full(const std::vector<std::pair<int, double>>& x, const FMParams& params);

/// Specialization for the user/item one-hot encoding:
/// w0 + w_u + w_{|U|+i} + <V[u], V[|U|+i]>.
double fm_score_pair(int user, int item, const FMParams& params, int numUsers);

/// Knowledge-aware initialization: k = |F|, V rows copied from the
/// TF-IDF profile matrix, biases zero.
FMParams init_kahfm(const ProfileMatrix& profiles);

/// Seeded random initialization for the plain BPR-FM baseline.
FMParams init_random(int n, int k, std::uint64_t seed, double scale = 0.1);

}  // namespace kahfm
