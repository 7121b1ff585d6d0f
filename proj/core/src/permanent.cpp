// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/permanent.hpp>

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace tritterlab {

namespace {

void check_shape(Eigen::Index rows, Eigen::Index cols, int max_dim) {
    if (rows != cols) {
        throw DimensionError("permanent: matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                             ", expected square");
    }
    if (rows > max_dim) {
        throw CapacityError("permanent: dimension " + std::to_string(rows) + " exceeds cap " +
                            std::to_string(max_dim));
    }
}

// Ryser: perm(A) = (-1)^n sum_{S != {}} (-1)^|S| prod_i sum_{j in S} a_ij.
// Subsets are visited in Gray-code order so each step flips one column in or out
// and the row sums are updated in O(n).
template <typename Scalar, typename Matrix>
Scalar ryser_gray(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return Scalar{1};
    if (n == 1) return a(0, 0);

    std::vector<Scalar> row_sums(static_cast<std::size_t>(n), Scalar{0});
    Scalar total{0};
    std::uint64_t gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;

    for (std::uint64_t k = 1; k < subsets; ++k) {
        const int col = std::countr_zero(k);
        const std::uint64_t bit = std::uint64_t{1} << col;
        gray ^= bit;
        const bool added = (gray & bit) != 0;
        for (int i = 0; i < n; ++i) {
            if (added) {
                row_sums[static_cast<std::size_t>(i)] += a(i, col);
            } else {
                row_sums[static_cast<std::size_t>(i)] -= a(i, col);
            }
        }
        Scalar prod = row_sums[0];
        for (int i = 1; i < n; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
        // sign (-1)^{n - |S|}
        const int popcount = std::popcount(gray);
        if (((n - popcount) & 1) == 0) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    return total;
}

}  // namespace

Complex permanent(const ComplexMatrix& m, int max_dim) {
    check_shape(m.rows(), m.cols(), max_dim);
    return ryser_gray<Complex>(m);
}

double permanent(const RealMatrix& m, int max_dim) {
    check_shape(m.rows(), m.cols(), max_dim);
    return ryser_gray<double>(m);
}

}  // namespace tritterlab
