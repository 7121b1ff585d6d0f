// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file classical_bounds.hpp
 * @brief Coincidence statistics of three independent phase-randomized coherent
 *        states sent through a three-port device, and the interference
 *        visibilities they can reach.
 *
 * Output field amplitudes are gamma_out = sum_in U[in, out] alpha_in. At fixed
 * phases the output is a product of coherent states, so
 *   P(m) = exp(-sum |gamma|^2) prod_i I_i^{m_i} / m_i!
 * where I_i = |gamma_i|^2 when every input interferes, and the incoherent sum
 * of the partial-field intensities when some inputs are delayed out of
 * coherence. The exponent keeps the fully coherent gamma.
 */

#pragma once

#include <tritterlab/fock.hpp>

#include <cstdint>
#include <vector>

namespace tritterlab {

struct CoherentInput {
    std::vector<Complex> amplitudes;  ///< alpha_i, one per input port
    bool phase_randomized = true;

    /// Equal moduli, zero phases.
    static CoherentInput equal(double modulus, int ports = 3);

    void validate() const;
};

/// Which inputs are mutually coherent at the detectors.
struct Scenario {
    enum class Kind { all_interfering, one_delayed, two_delayed };

    Kind kind = Kind::all_interfering;
    int port = -1;  ///< delayed input port (0-based) for one_delayed

    static Scenario all_interfering() { return {}; }
    static Scenario one_delayed(int port) { return {Kind::one_delayed, port}; }
    /// Every input incoherent with every other one.
    static Scenario two_delayed() { return {Kind::two_delayed, -1}; }
};

/// Probability of @p outcome at the phases carried by @p a.
[[nodiscard]] double coherent_outcome_probability(const TransferMatrix& u, const CoherentInput& a,
                                                  const FockOutcome& outcome, const Scenario& scenario);

struct AveragingMethod {
    enum class Kind { quadrature, monte_carlo };

    Kind kind = Kind::quadrature;
    int nodes = 32;              ///< trapezoid nodes per phase
    std::int64_t samples = 0;    ///< Monte Carlo samples
    std::uint64_t seed = 0;
    int threads = 0;             ///< 0 = hardware concurrency

    static AveragingMethod quadrature(int nodes = 32) { return {Kind::quadrature, nodes, 0, 0, 0}; }
    static AveragingMethod monte_carlo(std::int64_t samples, std::uint64_t seed = 0) {
        return {Kind::monte_carlo, 0, samples, seed, 0};
    }
    /// "quad:32" or "mc:1000000"
    static AveragingMethod parse(const std::string& text);
};

struct PhaseAverage {
    double mean = 0.0;
    double standard_error = 0.0;  ///< zero for quadrature
};

/// (2 pi)^-3 times the integral of the fixed-phase probability over the three
/// input phases, with the moduli of @p a held fixed.
[[nodiscard]] PhaseAverage phase_averaged_probability(const TransferMatrix& u, const CoherentInput& a,
                                                      const FockOutcome& outcome, const Scenario& scenario,
                                                      const AveragingMethod& method = AveragingMethod::quadrature());

/// Delayed inputs of a dip/peak measurement (0-based ports).
/// One port: G_inf has that port delayed, G_0 has every input interfering.
/// Two ports {held, scanned}: G_inf has all inputs mutually incoherent, G_0
/// has only @c held delayed.
struct DelayedSpec {
    std::vector<int> ports;
};

struct ClassicalVisibility {
    PhaseAverage gamma_inf;
    PhaseAverage gamma_0;
    double visibility = 0.0;
};

[[nodiscard]] ClassicalVisibility classical_visibility(const TransferMatrix& u, const CoherentInput& a,
                                                       const FockOutcome& outcome, const DelayedSpec& delayed,
                                                       const AveragingMethod& method = AveragingMethod::quadrature());

struct BoundSweep {
    std::vector<double> moduli;
    std::vector<double> visibilities;
    double supremum = 0.0;            ///< max |V| over the sweep
    double supremum_modulus = 0.0;
};

/// Equal-modulus inputs at @p steps evenly spaced moduli in [lo, hi].
[[nodiscard]] BoundSweep classical_bound_sweep(const TransferMatrix& u, const FockOutcome& outcome,
                                               const DelayedSpec& delayed,
                                               const AveragingMethod& method = AveragingMethod::quadrature(),
                                               double lo = 0.1, double hi = 3.0, int steps = 30);

}  // namespace tritterlab
