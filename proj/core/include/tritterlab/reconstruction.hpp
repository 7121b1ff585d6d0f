// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file reconstruction.hpp
 * @brief Transfer-matrix tomography from single-photon routing rates and
 *        two-photon Hong-Ou-Mandel visibilities.
 *
 * For inputs i != j and outputs k != l
 *   P^C = |U_ik U_jl|^2 + |U_il U_jk|^2,   P^Q = |U_ik U_jl + U_il U_jk|^2,
 *   V   = (P^C - P^Q) / P^C                (positive: dip, negative: peak).
 *
 * The fitted matrix has real, non-negative first row and first column; the
 * four remaining phases (2,2), (2,3), (3,2), (3,3) are free. Visibilities are
 * invariant under row/column phases, row/column positive rescaling and global
 * complex conjugation; the fit resolves the conjugation ambiguity by picking
 * the branch closest to the starting phases.
 */

#pragma once

#include <tritterlab/fock.hpp>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace tritterlab {

/// Unordered mode pair, stored with first < second (0-based).
struct ModePair {
    int first = 0;
    int second = 1;

    ModePair() = default;
    ModePair(int a, int b);  ///< canonicalizes the order; throws for a == b

    friend bool operator==(const ModePair&, const ModePair&) = default;
};

/// Visibilities for every (input pair, output pair) combination of an N-mode device.
class VisibilityMatrix {
public:
    struct Entry {
        ModePair inputs;
        ModePair outputs;
        std::optional<double> value;  ///< empty when P^C vanishes
        double sigma = 0.0;
    };

    explicit VisibilityMatrix(int dim = 3);

    [[nodiscard]] int dim() const noexcept { return dim_; }
    [[nodiscard]] int pair_count() const noexcept { return static_cast<int>(pairs_.size()); }
    [[nodiscard]] const std::vector<ModePair>& pairs() const noexcept { return pairs_; }

    [[nodiscard]] const Entry& at(ModePair inputs, ModePair outputs) const;
    [[nodiscard]] Entry& at(ModePair inputs, ModePair outputs);
    [[nodiscard]] std::optional<double> value(int i, int j, int k, int l) const { return at({i, j}, {k, l}).value; }
    void set(int i, int j, int k, int l, std::optional<double> value, double sigma = 0.0);

    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::vector<Entry>& entries() noexcept { return entries_; }

    [[nodiscard]] bool complete() const;

private:
    [[nodiscard]] std::size_t index_of(ModePair p) const;

    int dim_;
    std::vector<ModePair> pairs_;
    std::vector<Entry> entries_;  ///< row-major over (input pair, output pair)
};

/// n_ij = count rate for a single photon entering port i and leaving port j.
struct SinglesCounts {
    RealMatrix counts = RealMatrix::Zero(3, 3);
};

struct Uncertainties {
    RealMatrix moduli;  ///< standard deviation of |U_ij|
    RealMatrix phases;  ///< standard deviation of arg U_ij (zero on the gauge-fixed border)
    int runs = 0;
    int failures = 0;
};

struct ReconstructionResult {
    TransferMatrix matrix = TransferMatrix::identity(3);
    RealMatrix moduli;      ///< |U_ij|
    RealMatrix phases;      ///< arg U_ij in (-pi, pi], first row/column exactly 0
    double residual = 0.0;  ///< objective at the returned point
    double initial_residual = 0.0;
    double purity_q = 1.0;
    bool sigma_replaced = false;  ///< some sigma was zero and got replaced
    int runs = 0;
    int converged_runs = 0;
    std::optional<Uncertainties> uncertainties;
};

struct FitOptions {
    int restarts = 20;               ///< random restarts after the run from the given start
    std::uint64_t seed = 0;
    double column_penalty = 1e3;     ///< weight on sum_j (sum_i |U_ij|^2 - 1)^2
    double modulus_jitter = 0.05;    ///< relative perturbation of the moduli on restarts
    int max_evaluations = 20000;     ///< per simplex run
    int polish_rounds = 6;           ///< simplex rebuilds around the incumbent
    int threads = 0;                 ///< bootstrap worker threads, 0 = hardware concurrency
};

/// Raised when no optimizer run converges or the bootstrap fails too often.
class FitError : public Error {
public:
    using Error::Error;
};

/// All N-choose-2 squared visibilities of @p u; sigma entries are zero.
[[nodiscard]] VisibilityMatrix predict_visibilities(const TransferMatrix& u);

/// |U_ij|^2 = n_ij / sum_j n_ij
[[nodiscard]] RealMatrix moduli_from_singles(const SinglesCounts& counts);

/// Phases of the ideal tritter pattern: 0 border, 2pi/3, 4pi/3 / 4pi/3, 8pi/3.
[[nodiscard]] RealMatrix ideal_tritter_phases();

/// Multiplies rows and columns by unit phases so that the first row and first
/// column become real and non-negative.
[[nodiscard]] TransferMatrix gauge_fix(const TransferMatrix& u);

/// sum over entries of (V^r - V^m / q)^2 / sigma^2 for a candidate matrix
/// (unpenalized). Entries without a measured value are skipped.
[[nodiscard]] double visibility_misfit(const TransferMatrix& candidate, const VisibilityMatrix& measured, double q);

/// Weighted least-squares fit of |U| and the four free phases (3 modes only).
/// @p routing0 holds the starting |U_ij|^2 (row-normalized singles).
[[nodiscard]] ReconstructionResult fit_matrix(const VisibilityMatrix& measured, const RealMatrix& routing0, double q,
                                              const FitOptions& options = {});

/// S = 1 - sum |q a - b| / (2 n) over the n unordered (input pair, output pair)
/// entries. Throws DomainError if an entry is undefined in either argument.
[[nodiscard]] double similarity(const VisibilityMatrix& a, const VisibilityMatrix& b, double q = 1.0);

/// Standard deviations of the fitted parameters over @p runs refits with
/// Gaussian noise of scale sigma added to the measured visibilities.
[[nodiscard]] Uncertainties bootstrap_uncertainties(const VisibilityMatrix& measured, const RealMatrix& routing0,
                                                    double q, int runs = 40, const FitOptions& options = {});

}  // namespace tritterlab
