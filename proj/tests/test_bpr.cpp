#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kahfm/bpr.hpp"
#include "kahfm/rng.hpp"

using namespace kahfm;
using namespace kahfm::testing;

namespace {

Dataset separable() {
    // u0 likes i0 only, u1 likes i1 only
    return make_dataset(2, 2, {Row{0, 0}, Row{1, 1}});
}

double bpr_loss(const FMParams& p, int numUsers, const BprTriple& t) {
    double d = fm_score_pair(t.user, t.posItem, p, numUsers) -
               fm_score_pair(t.user, t.negItem, p, numUsers);
    return std::log1p(std::exp(-d));  // -ln sigma(d)
}

}  // namespace

TEST_CASE("sample_epoch shape and validity") {
    Corpus c = make_corpus();
    auto byUser = c.dataset.userItems();
    std::size_t positives = 0;
    for (const auto& v : byUser) positives += v.size();

    auto triples = sample_epoch(c.dataset, 7, 0);
    CHECK(triples.size() == positives);
    for (const auto& t : triples) {
        CHECK(std::binary_search(byUser[t.user].begin(), byUser[t.user].end(), t.posItem));
        CHECK_FALSE(std::binary_search(byUser[t.user].begin(), byUser[t.user].end(), t.negItem));
    }

    auto again = sample_epoch(c.dataset, 7, 0);
    CHECK(triples.size() == again.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        CHECK(triples[i].user == again[i].user);
        CHECK(triples[i].posItem == again[i].posItem);
        CHECK(triples[i].negItem == again[i].negItem);
    }
}

TEST_CASE("sample_epoch skips users who own the whole catalog") {
    auto ds = make_dataset(2, 2, {Row{0, 0}, Row{0, 1}, Row{1, 0}});
    int skipped = 0;
    auto triples = sample_epoch(ds, 1, 0, &skipped);
    CHECK(skipped == 1);
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].user == 1);
}

TEST_CASE("bpr_step on the all-zero model") {
    FMParams p;
    p.n = 4;
    p.k = 2;
    p.w.assign(4, 0.0);
    p.V.assign(8, 0.0);
    BprHyper h;
    h.learningRate = 0.1;
    h.biasReg = h.userReg = h.posItemReg = h.negItemReg = 0.0;

    bpr_step(p, 2, {0, 0, 1}, h);
    CHECK(p.w[2] == doctest::Approx(0.05).epsilon(1e-15));   // +0.5 * eta
    CHECK(p.w[3] == doctest::Approx(-0.05).epsilon(1e-15));  // -0.5 * eta
    for (double v : p.V) CHECK(v == 0.0);                    // V[u] = 0 blocks factor updates
    CHECK(p.w0 == 0.0);
    CHECK(p.w[0] == 0.0);
}

TEST_CASE("saturated pair reduces to regularization shrinkage") {
    FMParams p;
    p.n = 4;
    p.k = 1;
    p.w.assign(4, 0.0);
    p.V.assign(4, 0.0);
    p.w[2] = 500.0;  // d huge, g ~ 0
    p.w[3] = -500.0;
    BprHyper h;
    h.biasReg = 0.01;
    double before = p.w[2];
    bpr_step(p, 2, {0, 0, 1}, h);
    CHECK(p.w[2] == doctest::Approx(before * (1 - h.learningRate * h.biasReg)).epsilon(1e-9));
}

TEST_CASE("analytic gradient matches central finite differences") {
    // 3x3 model, k = 2, regs 0: updated params move by -eta * dL/dp
    Rng rng(77);
    BprHyper h;
    h.biasReg = h.userReg = h.posItemReg = h.negItemReg = 0.0;
    h.learningRate = 1.0;
    const double fd = 1e-5;
    const int numUsers = 3;

    for (int trial = 0; trial < 20; ++trial) {
        FMParams p = init_random(6, 2, 1000 + trial, 0.6);
        for (auto& w : p.w) w = rng.uniform01() - 0.5;
        BprTriple t{static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3)), 0};
        t.negItem = static_cast<int>((t.posItem + 1 + rng.below(2)) % 3);

        FMParams updated = p;
        bpr_step(updated, numUsers, t, h);

        auto check_grad = [&](double* param, double analytic) {
            double orig = *param;
            *param = orig + fd;
            double up = bpr_loss(p, numUsers, t);
            *param = orig - fd;
            double down = bpr_loss(p, numUsers, t);
            *param = orig;
            double numeric = (up - down) / (2 * fd);
            if (std::fabs(numeric) < 1e-10) {
                CHECK(std::fabs(analytic) < 1e-8);
            } else {
                CHECK(analytic == doctest::Approx(numeric).epsilon(1e-4));
            }
        };

        // update = -eta * gradient, eta = 1
        check_grad(&p.w[numUsers + t.posItem],
                   -(updated.w[numUsers + t.posItem] - p.w[numUsers + t.posItem]));
        check_grad(&p.w[numUsers + t.negItem],
                   -(updated.w[numUsers + t.negItem] - p.w[numUsers + t.negItem]));
        check_grad(&p.w0, 0.0);
        check_grad(&p.w[t.user], 0.0);
        for (int f = 0; f < p.k; ++f) {
            int uRow = t.user, iRow = numUsers + t.posItem, jRow = numUsers + t.negItem;
            check_grad(&p.V[uRow * p.k + f], -(updated.V[uRow * p.k + f] - p.V[uRow * p.k + f]));
            check_grad(&p.V[iRow * p.k + f], -(updated.V[iRow * p.k + f] - p.V[iRow * p.k + f]));
            check_grad(&p.V[jRow * p.k + f], -(updated.V[jRow * p.k + f] - p.V[jRow * p.k + f]));
        }
    }
}

TEST_CASE("bias shifts cancel out of the pairwise difference and updates") {
    FMParams p = init_random(5, 3, 4, 0.4);
    Rng rng(5);
    for (auto& w : p.w) w = rng.uniform01();
    const int numUsers = 2;
    BprTriple t{1, 0, 2};
    BprHyper h;

    FMParams shifted = p;
    shifted.w0 += 123.0;
    shifted.w[t.user] += -7.5;

    // through full scores the cancellation only holds up to rounding
    double d1 = fm_score_pair(t.user, t.posItem, p, numUsers) -
                fm_score_pair(t.user, t.negItem, p, numUsers);
    double d2 = fm_score_pair(t.user, t.posItem, shifted, numUsers) -
                fm_score_pair(t.user, t.negItem, shifted, numUsers);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));

    // the update path never adds the cancelling terms, so it is bit-exact
    double l1 = bpr_step(p, numUsers, t, h);
    double l2 = bpr_step(shifted, numUsers, t, h);
    CHECK(l1 == l2);
    CHECK(p.V == shifted.V);
    for (int j = 0; j < p.n; ++j) {
        if (j == t.user) continue;
        CHECK(p.w[j] == shifted.w[j]);
    }
}

TEST_CASE("train: zero iterations is the identity") {
    Corpus c = make_corpus();
    FMParams p = init_kahfm(c.profiles);
    FMParams before = p;
    BprHyper h;
    h.iterations = 0;
    auto trace = train(p, c.dataset, h);
    CHECK(trace.empty());
    CHECK(p.V == before.V);
    CHECK(p.w == before.w);
}

TEST_CASE("train separates the 2x2 dataset") {
    Dataset ds = separable();
    FMParams p = init_random(4, 2, 3, 0.1);
    BprHyper h;
    h.iterations = 50;
    h.seed = 3;
    auto trace = train(p, ds, h);
    CHECK(fm_score_pair(0, 0, p, 2) > fm_score_pair(0, 1, p, 2));
    CHECK(fm_score_pair(1, 1, p, 2) > fm_score_pair(1, 0, p, 2));
    REQUIRE(trace.size() == 50);
    CHECK(trace.back().meanLoss < trace.front().meanLoss);
}

TEST_CASE("mean epoch loss trends down on the synthetic corpus") {
    Corpus c = make_corpus();
    FMParams p = init_kahfm(c.profiles);
    BprHyper h;
    h.iterations = 30;
    auto trace = train(p, c.dataset, h);
    // fresh negatives make single epochs noisy; compare window means
    auto window = [&](int from, int to) {
        double sum = 0.0;
        for (int e = from; e < to; ++e) sum += trace[e].meanLoss;
        return sum / (to - from);
    };
    CHECK(window(25, 30) < window(0, 5));
    CHECK(trace.back().meanLoss < trace.front().meanLoss);
    for (double v : p.V) CHECK(std::isfinite(v));
}

TEST_CASE("training is deterministic") {
    Corpus c = make_corpus();
    BprHyper h;
    h.iterations = 5;
    FMParams a = init_kahfm(c.profiles);
    FMParams b = init_kahfm(c.profiles);
    train(a, c.dataset, h);
    train(b, c.dataset, h);
    CHECK(a.V == b.V);
    CHECK(a.w == b.w);
}

TEST_CASE("hyperparameter validation") {
    BprHyper h;
    h.learningRate = 0.0;
    CHECK_THROWS(h.validate());
    h = BprHyper{};
    h.userReg = -0.1;
    CHECK_THROWS(h.validate());
    // stock defaults survive validation
    CHECK(BprHyper{}.learningRate == 0.05);
    CHECK(BprHyper{}.biasReg == 0.0);
    CHECK(BprHyper{}.userReg == 0.0025);
    CHECK(BprHyper{}.posItemReg == 0.0025);
    CHECK(BprHyper{}.negItemReg == 0.00025);
    CHECK_NOTHROW(BprHyper{}.validate());
}
