#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kahfm {

/// A (predicate, object) pair from the knowledge graph; the unit of
/// interpretability. Both fields hold full IRIs (or a literal for object).
struct Feature {
    std::string predicate;
    std::string object;

    auto operator<=>(const Feature&) const = default;
};

struct Interaction {
    int user = -1;
    int item = -1;
    std::optional<double> rating;
    std::optional<std::int64_t> timestamp;
};

/// User-item interaction log with dense id maps. External string ids live
/// only in the index maps; everything else works with dense ints.
struct Dataset {
    std::vector<Interaction> interactions;
    int numUsers = 0;
    int numItems = 0;
    std::vector<std::string> userIds;  // dense id -> external id
    std::vector<std::string> itemIds;
    std::unordered_map<std::string, int> userIndex;
    std::unordered_map<std::string, int> itemIndex;

    /// Per-user sorted item lists (training profile I^u).
    std::vector<std::vector<int>> userItems() const;
};

/// Feature-indexed sparse vector in canonical form: no stored zeros,
/// all values finite, all ids < dimension.
class SparseVector {
public:
    SparseVector() = default;
    explicit SparseVector(int dimension) : dim_(dimension) {}

    int dimension() const { return dim_; }
    std::size_t nnz() const { return entries_.size(); }

    double get(int featureId) const {
        auto it = entries_.find(featureId);
        return it == entries_.end() ? 0.0 : it->second;
    }

    void set(int featureId, double value);

    const std::map<int, double>& entries() const { return entries_; }

    bool operator==(const SparseVector&) const = default;

private:
    std::map<int, double> entries_;
    int dim_ = 0;
};

/// FM parameters: global bias, linear weights over the n = |U|+|I|
/// one-hot variables, and the feature-aligned factor matrix V (n x k).
struct FMParams {
    double w0 = 0.0;
    std::vector<double> w;  // length n
    std::vector<double> V;  // row-major n x k
    int n = 0;
    int k = 0;

    std::span<double> row(int j) {
        return {V.data() + static_cast<std::size_t>(j) * k, static_cast<std::size_t>(k)};
    }
    std::span<const double> row(int j) const {
        return {V.data() + static_cast<std::size_t>(j) * k, static_cast<std::size_t>(k)};
    }
    /// Item rows sit below the |U| user rows.
    std::span<double> itemRow(int item, int numUsers) { return row(numUsers + item); }
    std::span<const double> itemRow(int item, int numUsers) const { return row(numUsers + item); }
};

double dot(const SparseVector& a, const SparseVector& b);
double dot(std::span<const double> a, std::span<const double> b);

/// Entries sorted by value descending, ties by ascending feature id.
/// Unstored (zero) coordinates rank below every positive value and above
/// every negative one, with the same tie rule among themselves.
std::vector<std::pair<int, double>> top_k(const SparseVector& v, std::size_t K);
std::vector<std::pair<int, double>> top_k(std::span<const double> v, std::size_t K);

}  // namespace kahfm
