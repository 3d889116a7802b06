#pragma once

#include <cstdint>
#include <vector>

#include "xfdiag/matrix.hpp"

namespace xfdiag {

enum class RowProvenance { original, synthetic, retained };

struct SmoteResult {
    Matrix synthetic;
    bool k_reduced = false;  // set when k had to shrink to minority_count - 1
};

// Each synthetic row is x + u * (neighbor - x) with u uniform in [0,1] and the
// neighbor drawn from x's k nearest minority rows (Euclidean).  Base rows
// cycle round-robin through the minority set.
SmoteResult smote(const Matrix& minority, int k, std::size_t n_synthetic, std::uint64_t seed);

// NearMiss-1: indices (ascending) of the n_keep majority rows with the
// smallest mean Euclidean distance to their n_neighbors nearest minority rows;
// rank ties keep the lower row index.
std::vector<std::size_t> nearmiss(const Matrix& majority, const Matrix& minority,
                                  std::size_t n_keep, int n_neighbors = 3);

struct BalancedSet {
    Matrix X;
    std::vector<int> labels;
    std::vector<RowProvenance> provenance;
    std::size_t target_count = 0;
    bool smote_k_reduced = false;
};

// Balances a two-class problem to parity: the minority class is oversampled
// with SMOTE and the majority undersampled with NearMiss-1 until both sit at
// the target count (default: mean of the two class counts).  Original and
// retained rows keep their input order; synthetic rows follow at the end.
BalancedSet rebalance_binary(const Matrix& X, const std::vector<int>& labels, std::uint64_t seed,
                             std::size_t target_count = 0, int smote_k = 5);

}  // namespace xfdiag
