// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <tritterlab/fock.hpp>

#include <utility>
#include <vector>

namespace tritterlab {

/// Three identical waveguides, each coupled to the other two with strength k.
struct CouplerParams {
    double coupling_k = 0.0;        ///< 1/length, > 0
    double propagation_beta = 0.0;  ///< 1/length
    double length_z = 0.0;          ///< length, >= 0

    void validate() const;
};

/// Closed-form solution of i dA/dz = (beta I + k (J - I)) A, i.e. U(z) = exp(-i C z):
///   diagonal     e^{-i beta z} (2 e^{i k z} + e^{-2 i k z}) / 3
///   off-diagonal e^{-i beta z} (e^{-2 i k z} - e^{i k z}) / 3
[[nodiscard]] TransferMatrix tritter_matrix(const CouplerParams& p);

/// Power fraction coupled across a two-waveguide coupler with the same k and L, sin^2(kL).
[[nodiscard]] double two_coupler_reflectivity(double coupling_k, double length);

/// Interaction length giving equal 1/3 splitting in the three-guide coupler: L = 2 pi / (9 k).
[[nodiscard]] double balanced_length(double coupling_k);

/// User-supplied (waveguide spacing, k) calibration points; k is interpolated
/// log-linearly in spacing and extrapolated from the end segments.
class CouplingCalibration {
public:
    explicit CouplingCalibration(std::vector<std::pair<double, double>> spacing_to_k);

    [[nodiscard]] double coupling_at(double spacing) const;

private:
    std::vector<std::pair<double, double>> points_;
};

}  // namespace tritterlab
