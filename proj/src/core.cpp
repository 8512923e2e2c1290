#include "kahfm/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kahfm {

std::vector<std::vector<int>> Dataset::userItems() const {
    std::vector<std::vector<int>> items(numUsers);
    for (const auto& t : interactions) items[t.user].push_back(t.item);
    for (auto& v : items) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return items;
}

void SparseVector::set(int featureId, double value) {
    if (featureId < 0 || featureId >= dim_)
        throw std::out_of_range("SparseVector: feature id out of range");
    if (!std::isfinite(value))
        throw std::invalid_argument("SparseVector: non-finite value");
    if (value == 0.0)
        entries_.erase(featureId);
    else
        entries_[featureId] = value;
}

double dot(const SparseVector& a, const SparseVector& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("dot: dimension mismatch");
    // iterate the smaller map
    const SparseVector& small = a.nnz() <= b.nnz() ? a : b;
    const SparseVector& large = a.nnz() <= b.nnz() ? b : a;
    double acc = 0.0;
    for (const auto& [f, v] : small.entries()) acc += v * large.get(f);
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

namespace {

bool ranks_before(const std::pair<int, double>& a, const std::pair<int, double>& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
}

}  // namespace

std::vector<std::pair<int, double>> top_k(const SparseVector& v, std::size_t K) {
    const std::size_t want = std::min<std::size_t>(K, static_cast<std::size_t>(v.dimension()));
    std::vector<std::pair<int, double>> pos, neg;
    for (const auto& [f, val] : v.entries())
        (val > 0.0 ? pos : neg).emplace_back(f, val);
    std::sort(pos.begin(), pos.end(), ranks_before);
    std::sort(neg.begin(), neg.end(), ranks_before);

    std::vector<std::pair<int, double>> out;
    out.reserve(want);
    for (const auto& e : pos) {
        if (out.size() == want) return out;
        out.push_back(e);
    }
    // zero coordinates by ascending id, generated lazily
    auto stored = v.entries().begin();
    for (int f = 0; f < v.dimension() && out.size() < want; ++f) {
        while (stored != v.entries().end() && stored->first < f) ++stored;
        if (stored != v.entries().end() && stored->first == f) continue;
        out.emplace_back(f, 0.0);
    }
    for (const auto& e : neg) {
        if (out.size() == want) break;
        out.push_back(e);
    }
    return out;
}

std::vector<std::pair<int, double>> top_k(std::span<const double> v, std::size_t K) {
    const std::size_t want = std::min<std::size_t>(K, v.size());
    std::vector<std::pair<int, double>> all;
    all.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) all.emplace_back(static_cast<int>(i), v[i]);
    std::partial_sort(all.begin(), all.begin() + want, all.end(), ranks_before);
    all.resize(want);
    return all;
}

}  // namespace kahfm
