// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <tritterlab/fock.hpp>

namespace tritterlab {

/// Largest matrix accepted by permanent() unless a different cap is passed.
inline constexpr int kMaxPermanentDim = 24;

/// Exact permanent by Ryser's formula with Gray-code subset ordering, O(2^n n).
/// Throws DimensionError for non-square input and CapacityError above @p max_dim.
[[nodiscard]] Complex permanent(const ComplexMatrix& m, int max_dim = kMaxPermanentDim);

/// Real-valued overload used for classical routing sums.
[[nodiscard]] double permanent(const RealMatrix& m, int max_dim = kMaxPermanentDim);

}  // namespace tritterlab
