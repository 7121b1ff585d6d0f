// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Transfer matrices, Fock occupation vectors and exact bosonic /
 *        distinguishable-particle evolution through small linear interferometers.
 *
 * Convention used throughout the library: entry (i, j) of a transfer matrix is
 * the amplitude for a photon entering input port i to leave through output
 * port j. Rows are inputs, columns are outputs.
 */

#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tritterlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Maximum photon number accepted by the exact kernels unless overridden.
inline constexpr int kDefaultMaxPhotons = 9;

/// Tolerance on max|U U^dagger - I| for matrices constructed as unitaries.
inline constexpr double kUnitaryTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base class for every error raised by tritterlab.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes of the arguments do not agree (matrix size vs. occupation length...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A numeric precondition was violated (empty input, bad parameter range...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Photon number exceeds the configured cap of the exact kernels.
class CapacityError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// TransferMatrix
// ---------------------------------------------------------------------------

class TransferMatrix {
public:
    /// Accepts any square matrix with dim >= 2; records its unitarity deviation.
    explicit TransferMatrix(ComplexMatrix entries);

    /// Builds a matrix that must be unitary within @p tolerance; throws DomainError otherwise.
    static TransferMatrix unitary(ComplexMatrix entries, double tolerance = kUnitaryTolerance);

    static TransferMatrix identity(int dim);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(entries_.rows()); }
    [[nodiscard]] const ComplexMatrix& entries() const noexcept { return entries_; }
    [[nodiscard]] Complex operator()(int in, int out) const { return entries_(in, out); }

    /// max_{ij} |(U U^dagger - I)_{ij}|
    [[nodiscard]] double unitary_deviation() const noexcept { return unitary_deviation_; }
    [[nodiscard]] bool is_unitary(double tolerance = kUnitaryTolerance) const noexcept {
        return unitary_deviation_ <= tolerance;
    }

    /// |U_ij|^2, the single-photon routing probabilities.
    [[nodiscard]] RealMatrix routing_probabilities() const;

private:
    ComplexMatrix entries_;
    double unitary_deviation_ = 0.0;
};

/// The symmetric tritter with real first row and column (Fourier form).
[[nodiscard]] TransferMatrix ideal_tritter();

/// N-mode discrete Fourier matrix, U_jk = exp(2 pi i jk/N)/sqrt(N).
[[nodiscard]] TransferMatrix fourier_matrix(int dim);

// ---------------------------------------------------------------------------
// FockOutcome
// ---------------------------------------------------------------------------

/// Occupation numbers of each mode.
class FockOutcome {
public:
    FockOutcome() = default;
    explicit FockOutcome(std::vector<int> occupations);
    FockOutcome(std::initializer_list<int> occupations);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(occ_.size()); }
    [[nodiscard]] int total() const noexcept { return total_; }
    [[nodiscard]] int operator[](int mode) const { return occ_.at(static_cast<std::size_t>(mode)); }
    [[nodiscard]] const std::vector<int>& occupations() const noexcept { return occ_; }

    /// Mode index of every photon, in ascending mode order: (2,0,1) -> {0,0,2}.
    [[nodiscard]] std::vector<int> photon_modes() const;

    /// Occupations sorted descending; (0,1,2) -> (2,1,0). Identifies the outcome class.
    [[nodiscard]] std::vector<int> pattern() const;

    /// "1,1,1"
    [[nodiscard]] std::string to_string() const;
    /// Parses "1,1,1" (whitespace tolerated).
    static FockOutcome parse(const std::string& text);

    friend bool operator==(const FockOutcome& a, const FockOutcome& b) { return a.occ_ == b.occ_; }
    friend auto operator<=>(const FockOutcome& a, const FockOutcome& b) { return a.occ_ <=> b.occ_; }

private:
    std::vector<int> occ_;
    int total_ = 0;
};

/// Every occupation vector of @p photons photons in @p dim modes, lexicographically descending.
[[nodiscard]] std::vector<FockOutcome> enumerate_outcomes(int dim, int photons);

// ---------------------------------------------------------------------------
// OutcomeDistribution
// ---------------------------------------------------------------------------

class OutcomeDistribution {
public:
    struct Entry {
        FockOutcome outcome;
        double probability = 0.0;
    };

    OutcomeDistribution() = default;
    /// Entries must share photon number; they are stored in descending lexicographic order.
    OutcomeDistribution(int total_photons, std::vector<Entry> entries, double norm_deficit = 0.0);

    [[nodiscard]] int total_photons() const noexcept { return total_photons_; }
    [[nodiscard]] const std::vector<Entry>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }

    /// 0 when the outcome is not listed.
    [[nodiscard]] double probability(const FockOutcome& outcome) const;
    [[nodiscard]] double sum() const;

    /// 1 - (sum before renormalization). Non-zero only for lossy / near-unitary matrices.
    [[nodiscard]] double norm_deficit() const noexcept { return norm_deficit_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    int total_photons_ = 0;
    std::vector<Entry> entries_;
    double norm_deficit_ = 0.0;
};

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

struct EvolveOptions {
    int max_photons = kDefaultMaxPhotons;
};

/// Indistinguishable bosons: |perm(U[in,out])|^2 / (prod in! prod out!) per outcome.
[[nodiscard]] OutcomeDistribution evolve_quantum(const TransferMatrix& u, const FockOutcome& input,
                                                 const EvolveOptions& options = {});

/// Fully distinguishable particles, each routed independently with probability |U_ij|^2.
[[nodiscard]] OutcomeDistribution evolve_classical(const TransferMatrix& u, const FockOutcome& input,
                                                   const EvolveOptions& options = {});

/// Single-outcome quantum amplitude, unnormalized by the deficit of near-unitary matrices.
[[nodiscard]] Complex transition_amplitude(const TransferMatrix& u, const FockOutcome& input,
                                           const FockOutcome& output);

struct ProbabilityRatio {
    enum class Kind {
        finite,      ///< both probabilities positive
        suppressed,  ///< P^q vanishes while P^cl does not; value is 0
        divergent,   ///< P^cl vanishes while P^q does not; value is +inf
        undefined,   ///< both vanish; value is NaN
    };
    Kind kind = Kind::finite;
    double value = 0.0;
};

/// Probabilities below this are treated as exact zeros when forming ratios.
inline constexpr double kZeroProbability = 1e-13;

/// P^q(output) / P^cl(output) for the given input.
[[nodiscard]] ProbabilityRatio quantum_classical_ratio(const TransferMatrix& u, const FockOutcome& input,
                                                       const FockOutcome& output,
                                                       const EvolveOptions& options = {});

}  // namespace tritterlab
