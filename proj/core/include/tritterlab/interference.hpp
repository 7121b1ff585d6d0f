// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file interference.hpp
 * @brief Delay-dependent multiphoton interference with partially distinguishable photons.
 *
 * Photons are treated as labelled particles, each sitting in one input mode and
 * carrying an internal (spectral/temporal) state. Pairwise overlaps of the
 * internal states form a real, symmetric, positive semidefinite Gram matrix with
 * unit diagonal. For Gaussian spectra of intensity width dw and arrival times t_a
 * the overlap modulus is exp(-dw^2 (t_a - t_b)^2 / 2); central-frequency phases
 * cancel around every permutation cycle so only moduli are stored.
 */

#pragma once

#include <tritterlab/fock.hpp>

#include <span>
#include <vector>

namespace tritterlab {

/// Arrival delays of the photons (one per photon, in input-mode order).
struct DelayConfig {
    std::vector<double> delays;
    double spectral_width = 1.0;     ///< dw > 0, inverse time units
    double central_frequency = 0.0;  ///< w0 >= 0; drops out of every probability

    void validate() const;
    /// exp(-dw^2 (t_a - t_b)^2 / 2)
    [[nodiscard]] double overlap(int a, int b) const;
};

/// Overlaps below this value count as "out of the interference region".
inline constexpr double kOutOfInterferenceOverlap = 1e-8;

/// Smallest |dt| whose overlap drops below kOutOfInterferenceOverlap (about 6.07 / dw).
[[nodiscard]] double out_of_interference_delay(double spectral_width);

class OverlapMatrix {
public:
    /// Validates symmetry, unit diagonal, entries in [0, 1] and positive semidefiniteness.
    explicit OverlapMatrix(RealMatrix entries);

    static OverlapMatrix from_delays(const DelayConfig& delays);
    /// Fully indistinguishable photons.
    static OverlapMatrix all_ones(int photons);
    /// Fully distinguishable photons.
    static OverlapMatrix identity(int photons);

    /// Multiplies the overlap of photons with different labels by @p factor
    /// (partial indistinguishability between photons from different sources).
    [[nodiscard]] OverlapMatrix with_label_factor(std::span<const int> labels, double factor) const;

    /// Sets every overlap between photon @p photon and the others to zero.
    [[nodiscard]] OverlapMatrix without_interference(int photon) const;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const RealMatrix& entries() const noexcept { return entries_; }
    [[nodiscard]] double operator()(int a, int b) const { return entries_(a, b); }

private:
    RealMatrix entries_;
};

/// Closed-form ideal-tritter probabilities for one photon per input port, as a
/// function of the delays t1, t2, t3. Supported outcomes: (1,1,1), any
/// arrangement of (2,1,0) and any arrangement of (3,0,0). Throws DomainError
/// for other outcomes.
[[nodiscard]] double hom_surface_closed_form(const FockOutcome& outcome, const DelayConfig& delays);

/// General engine for single photons in distinct input modes:
///   P(d) = 1/prod(out!) sum_{sigma,rho} prod_k U[sigma_k, d_k] conj(U[rho_k, d_k]) S[rho_k, sigma_k]
/// @p overlaps is indexed by photon in ascending input-mode order.
[[nodiscard]] double hom_probability_general(const TransferMatrix& u, const FockOutcome& input,
                                             const FockOutcome& outcome, const OverlapMatrix& overlaps);

/// Same sum for arbitrary photon placement, several photons per input mode
/// allowed. The input is normalized by sum over mode-preserving permutations of
/// prod S. Not renormalized for near-unitary matrices.
[[nodiscard]] double labeled_photon_probability(const TransferMatrix& u, std::span<const int> photon_modes,
                                                const OverlapMatrix& overlaps, const FockOutcome& outcome);

/// Full output distribution of labeled_photon_probability, renormalized to one
/// (deficit reported). Photon count is capped by @p options.
[[nodiscard]] OutcomeDistribution labeled_photon_distribution(const TransferMatrix& u,
                                                              std::span<const int> photon_modes,
                                                              const OverlapMatrix& overlaps,
                                                              const EvolveOptions& options = {});

/// (G_inf - G_0) / G_inf; positive is a dip, negative a peak.
[[nodiscard]] double visibility_from_counts(double gamma_inf, double gamma_0);

}  // namespace tritterlab
