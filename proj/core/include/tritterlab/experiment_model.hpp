// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file experiment_model.hpp
 * @brief Four-fold coincidence predictions for a heralded three-photon input
 *        built from two SPDC pairs: pair-to-pair distinguishability, the
 *        six-photon emission term and the splitter-cascade detection scheme.
 *
 * Source: one pair feeds input ports 1 and 3 (via a splitter), the other feeds
 * port 2 and the trigger. The n-pair component of the emitted state is
 *   (n+1)^{-1/2} sum_k |k, n-k, k>_{1,2,3} |n-k>_T .
 * Only the k = 1 branch of the two-pair term yields a heralded |1,1,1>.
 *
 * Rates are expressed per two-pair emission event, so the leading term of a
 * detected rate is P(outcome) times the detection factor, and the six-photon
 * term is proportional to g^2.
 */

#pragma once

#include <tritterlab/fock.hpp>

#include <string>
#include <vector>

namespace tritterlab {

struct SourceModel {
    double p = 1.0;    ///< overlap modulus between photons of different pairs
    double q = 1.0;    ///< two-photon purity factor (used by reconstruction only)
    double g = 0.0;    ///< parametric gain
    double eta = 1.0;  ///< single-detector efficiency

    void validate() const;
    [[nodiscard]] double r() const noexcept { return p * p; }
    /// false beyond g = 0.5, where the gain expansion is no longer trustworthy
    [[nodiscard]] bool perturbative() const noexcept { return g <= 0.5; }
};

/// Dip/peak measurements on the three-photon input.
///   A: G_inf has photon 2 delayed, G_0 has all photons together.
///   B: G_inf has photon 3 delayed, G_0 has all photons together.
///   C: photon 2 stays delayed; G_inf additionally delays photon 3.
enum class DelayCase { none, A, B, C };

/// Which end of the delay scan.
enum class Arm { zero_delay, out_of_interference };

struct MeasurementScenario {
    DelayCase delay_case = DelayCase::none;
    FockOutcome outcome{1, 1, 1};

    void validate() const;
};

[[nodiscard]] DelayCase parse_delay_case(const std::string& text);
[[nodiscard]] std::string to_string(DelayCase c);

/// Input photons (0-based ports) out of the interference region in @p arm.
[[nodiscard]] std::vector<int> delayed_ports(DelayCase c, Arm arm);

/// r P(all indistinguishable) + (1 - r) P(photon 2 distinguishable), r = p^2,
/// with the delayed photons of @p arm made distinguishable from the rest.
[[nodiscard]] double mixture_probability(const TransferMatrix& u, const SourceModel& s,
                                         const MeasurementScenario& scenario, Arm arm = Arm::zero_delay);

/// Full three-photon output distribution of the same mixture.
[[nodiscard]] OutcomeDistribution mixture_distribution(const TransferMatrix& u, const SourceModel& s,
                                                       const std::vector<int>& delayed);

/// Probability that non-resolving detectors register @p target when photons
/// arrive as @p arrived. An output expected to carry m photons is read by one
/// detector (m <= 1) or split evenly over three (m >= 2), and needs m distinct
/// clicks. Outputs with no expected photon are not read.
[[nodiscard]] double click_probability(const FockOutcome& arrived, const FockOutcome& target, double eta);

/// eta^4, (2/3) eta^4 or (2/9) eta^4 for (1,1,1), (2,1,0)-type, (3,0,0)-type.
[[nodiscard]] double detection_factor(const FockOutcome& target, double eta);

/// sum_o P(o) click(o, target) times the trigger click probability.
[[nodiscard]] double detect_fourfold(const OutcomeDistribution& dist, const FockOutcome& target, double eta,
                                     int trigger_photons = 1);

/// Detected six-photon contribution to the four-fold rate of @p arm, in the
/// units of the leading term (zero at g = 0, proportional to g^2).
[[nodiscard]] double six_photon_correction(const TransferMatrix& u, const SourceModel& s,
                                           const MeasurementScenario& scenario, Arm arm = Arm::zero_delay);

struct Prediction {
    double gamma_inf = 0.0;
    double gamma_0 = 0.0;
    double visibility = 0.0;
    double six_photon_share = 0.0;  ///< six-photon fraction of gamma_0
    std::vector<std::string> warnings;
};

/// Detected four-fold rate for one arm: leading term plus six-photon term.
[[nodiscard]] double detected_rate(const TransferMatrix& u, const SourceModel& s, const MeasurementScenario& scenario,
                                   Arm arm);

[[nodiscard]] Prediction predicted_visibility(const TransferMatrix& u, const SourceModel& s,
                                              const MeasurementScenario& scenario);

struct LadderStep {
    std::string label;
    OutcomeDistribution distribution;
};

/// Output distributions for |1,1,1> at zero delay, from the ideal device with
/// identical photons down to the measured device with distinguishability and
/// six-photon events:
///   ideal p=1, measured p=1, ideal p, measured p, measured p + six-photon.
/// The last step divides each detected rate by its detection factor and
/// renormalizes.
[[nodiscard]] std::vector<LadderStep> prediction_ladder(const TransferMatrix& ideal, const TransferMatrix& measured,
                                                        const SourceModel& s);

}  // namespace tritterlab
