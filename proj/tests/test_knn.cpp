#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "kahfm/knn.hpp"
#include "kahfm/rng.hpp"

using namespace kahfm;
using namespace kahfm::testing;

namespace {

ItemMatrix random_items(int numItems, int dim, std::uint64_t seed) {
    ItemMatrix m;
    m.numItems = numItems;
    m.dimension = dim;
    m.data.resize(static_cast<std::size_t>(numItems) * dim);
    Rng rng(seed);
    for (auto& v : m.data) v = rng.uniform01() * 2 - 1;
    return m;
}

// O(|I|^2) reimplementation of neighborhood scoring, straight from the
// definitions, used as the oracle
std::vector<std::pair<int, double>> brute_force_topn(int N, const ItemMatrix& items, int k_nn,
                                                     const std::vector<int>& trainItems) {
    std::vector<std::pair<int, double>> result;
    for (int i = 0; i < items.numItems; ++i) {
        if (std::binary_search(trainItems.begin(), trainItems.end(), i)) continue;
        std::vector<std::pair<int, double>> sims;
        for (int j = 0; j < items.numItems; ++j)
            if (j != i) sims.emplace_back(j, cosine(items.row(i), items.row(j)));
        std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (static_cast<int>(sims.size()) > k_nn) sims.resize(k_nn);
        double num = 0, den = 0;
        for (const auto& [j, cs] : sims) {
            den += cs;
            if (std::binary_search(trainItems.begin(), trainItems.end(), j)) num += cs;
        }
        result.emplace_back(i, std::fabs(den) < 1e-12 ? 0.0 : num / den);
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (static_cast<int>(result.size()) > N) result.resize(N);
    return result;
}

}  // namespace

TEST_CASE("cosine basics") {
    std::vector<double> a{1, 2, 3}, b{-2, 1, 0}, z{0, 0, 0};
    CHECK(cosine(std::span<const double>(a), std::span<const double>(a)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(std::span<const double>(a), std::span<const double>(b)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine(std::span<const double>(a), std::span<const double>(z)) == 0.0);
    std::vector<double> a2{2, 4, 6};
    std::vector<double> c{0.3, -1, 2};
    CHECK(cosine(std::span<const double>(a2), std::span<const double>(c)) ==
          doctest::Approx(cosine(std::span<const double>(a), std::span<const double>(c)))
              .epsilon(1e-12));
}

TEST_CASE("build_neighbors degenerate and exhaustive cases") {
    ItemMatrix m;
    m.numItems = 3;
    m.dimension = 2;
    m.data = {1, 1, 1, 1, 1, 1};
    auto index = build_neighbors(m, 2);
    for (int i = 0; i < 3; ++i) {
        REQUIRE(index.neighbors[i].size() == 2);
        for (const auto& [j, cs] : index.neighbors[i]) {
            CHECK(j != i);
            CHECK(cs == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    auto rnd = random_items(10, 4, 2);
    auto full = build_neighbors(rnd, 9);  // k_nn = |I| - 1
    for (const auto& list : full.neighbors) CHECK(list.size() == 9);
    auto truncated = build_neighbors(rnd, 50);  // catalog smaller than k_nn
    for (const auto& list : truncated.neighbors) CHECK(list.size() == 9);

    for (const auto& list : full.neighbors) {
        for (std::size_t r = 1; r < list.size(); ++r) {
            CHECK(list[r - 1].second >= list[r].second);
            if (list[r - 1].second == list[r].second) CHECK(list[r - 1].first < list[r].first);
        }
        for (const auto& [j, cs] : list) {
            CHECK(cs >= -1.0 - 1e-12);
            CHECK(cs <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("knn_score overlap cases") {
    ItemMatrix m;
    m.numItems = 3;
    m.dimension = 2;
    m.data = {1, 0, 1, 0.1, 0.1, 1};
    auto index = build_neighbors(m, 2);

    CHECK(knn_score(0, index, {1, 2}) == doctest::Approx(1.0).epsilon(1e-12));  // N^i in I^u
    CHECK(knn_score(0, index, {}) == 0.0);

    // hand-built neighbor list: (j1, 0.8) in I^u, (j2, 0.2) not
    NeighborIndex hand;
    hand.neighbors = {{{1, 0.8}, {2, 0.2}}};
    CHECK(knn_score(0, hand, {1}) == doctest::Approx(0.8).epsilon(1e-12));

    NeighborIndex zero;
    zero.neighbors = {{{1, 0.5}, {2, -0.5}}};
    CHECK(knn_score(0, zero, {1}) == 0.0);  // denominator vanishes
}

TEST_CASE("knn_score bounded by 1 under nonnegative similarities") {
    auto m = random_items(20, 3, 4);
    for (auto& v : m.data) v = std::fabs(v);  // nonnegative rows, nonnegative cosines
    auto index = build_neighbors(m, 8);
    std::vector<int> history{0, 3, 5, 9, 11};
    for (int i = 0; i < 20; ++i) {
        double s = knn_score(i, index, history);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0 + 1e-9);
    }
}

TEST_CASE("recommend_topn trivial cases") {
    auto m = random_items(4, 3, 8);
    auto index = build_neighbors(m, 3);
    CHECK(recommend_topn(0, 10, index, {0, 1, 2, 3}, 4).empty());  // nothing unrated
    CHECK(recommend_topn(0, 10, index, {0}, 4).size() == 3);       // N > candidates
}

TEST_CASE("production pipeline equals the brute-force oracle") {
    for (std::uint64_t seed : {10ULL, 11ULL}) {
        auto m = random_items(50, 6, seed);
        std::vector<int> history{1, 4, 7, 20, 33, 41};
        for (int k_nn : {5, 49}) {
            auto index = build_neighbors(m, k_nn);
            auto mine = recommend_topn(0, 10, index, history, 50);
            auto oracle = brute_force_topn(10, m, k_nn, history);
            REQUIRE(mine.size() == oracle.size());
            for (std::size_t r = 0; r < mine.size(); ++r) {
                CHECK(mine[r].first == oracle[r].first);
                CHECK(mine[r].second == doctest::Approx(oracle[r].second).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("uniform scaling leaves recommendations unchanged") {
    auto m = random_items(15, 4, 21);
    auto scaled = m;
    for (auto& v : scaled.data) v *= 3.7;
    std::vector<int> history{2, 5, 8};
    auto a = recommend_topn(0, 15, build_neighbors(m, 6), history, 15);
    auto b = recommend_topn(0, 15, build_neighbors(scaled, 6), history, 15);
    REQUIRE(a.size() == b.size());
    for (std::size_t r = 0; r < a.size(); ++r) CHECK(a[r].first == b[r].first);
}
