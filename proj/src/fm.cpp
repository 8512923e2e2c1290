#include "kahfm/fm.hpp"

#include <stdexcept>

#include "kahfm/rng.hpp"

namespace kahfm {

double fm_score_full(const std::vector<std::pair<int, double>>& x, const FMParams& params) {
    double score = params.w0;
    for (const auto& [j, xj] : x) {
        if (j < 0 || j >= params.n)
            throw std::invalid_argument("fm_score_full: index out of range");
        score += params.w[j] * xj;
    }
    for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = a + 1; b < x.size(); ++b)
            score += x[a].second * x[b].second * dot(params.row(x[a].first), params.row(x[b].first));
    return score;
}

double fm_score_pair(int user, int item, const FMParams& params, int numUsers) {
    int itemVar = numUsers + item;
    if (user < 0 || user >= numUsers || itemVar >= params.n || item < 0)
        throw std::invalid_argument("fm_score_pair: id out of range");
    return params.w0 + params.w[user] + params.w[itemVar] +
           dot(params.row(user), params.row(itemVar));
}

FMParams init_kahfm(const ProfileMatrix& profiles) {
    FMParams p;
    p.n = profiles.numUsers + profiles.numItems;
    p.k = profiles.dimension;
    p.w.assign(p.n, 0.0);
    p.V.assign(static_cast<std::size_t>(p.n) * p.k, 0.0);
    for (int j = 0; j < p.n; ++j) {
        auto row = p.row(j);
        for (const auto& [f, val] : profiles.rows[j].entries()) row[f] = val;
    }
    return p;
}

FMParams init_random(int n, int k, std::uint64_t seed, double scale) {
    if (k <= 0) throw std::invalid_argument("init_random: k must be positive");
    FMParams p;
    p.n = n;
    p.k = k;
    p.w.assign(n, 0.0);
    p.V.resize(static_cast<std::size_t>(n) * k);
    Rng rng(derive_seed(seed, "init_random"));
    for (auto& v : p.V) v = rng.normal(0.0, scale);
    return p;
}

}  // namespace kahfm
