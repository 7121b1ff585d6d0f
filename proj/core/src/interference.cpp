// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/interference.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tritterlab {

namespace {

constexpr double kPsdTolerance = 1e-12;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// sum over permutations pi that keep every photon inside its own input mode of
// prod_k S[k, pi_k]; the squared norm of the labelled input state.
double input_norm(std::span<const int> photon_modes, const OverlapMatrix& s,
                  const std::vector<std::vector<int>>& perms) {
    double norm = 0.0;
    for (const auto& pi : perms) {
        bool keeps_modes = true;
        double term = 1.0;
        for (std::size_t k = 0; k < pi.size(); ++k) {
            const auto target = static_cast<std::size_t>(pi[k]);
            if (photon_modes[target] != photon_modes[k]) {
                keeps_modes = false;
                break;
            }
            term *= s(static_cast<int>(k), pi[k]);
        }
        if (keeps_modes) norm += term;
    }
    return norm;
}

double engine(const TransferMatrix& u, std::span<const int> photon_modes, const OverlapMatrix& s,
              const FockOutcome& outcome, const std::vector<std::vector<int>>& perms, double norm) {
    const int n = static_cast<int>(photon_modes.size());
    const auto cols = outcome.photon_modes();

    // a(p, k) = U[mode of photon p, k-th output slot]
    ComplexMatrix a(n, n);
    for (int p = 0; p < n; ++p) {
        for (int k = 0; k < n; ++k) a(p, k) = u(photon_modes[static_cast<std::size_t>(p)], cols[static_cast<std::size_t>(k)]);
    }

    std::vector<Complex> path(perms.size());
    for (std::size_t i = 0; i < perms.size(); ++i) {
        Complex prod{1.0, 0.0};
        for (int k = 0; k < n; ++k) prod *= a(perms[i][static_cast<std::size_t>(k)], k);
        path[i] = prod;
    }

    Complex total{0.0, 0.0};
    for (std::size_t i = 0; i < perms.size(); ++i) {
        if (path[i] == Complex{}) continue;
        const auto& sigma = perms[i];
        for (std::size_t j = 0; j < perms.size(); ++j) {
            const auto& rho = perms[j];
            double overlap = 1.0;
            for (int k = 0; k < n && overlap != 0.0; ++k) {
                overlap *= s(rho[static_cast<std::size_t>(k)], sigma[static_cast<std::size_t>(k)]);
            }
            if (overlap == 0.0) continue;
            total += path[i] * std::conj(path[j]) * overlap;
        }
    }

    double out_norm = 1.0;
    for (int m : outcome.occupations()) out_norm *= factorial(m);
    const double p = total.real() / (out_norm * norm);
    return std::max(p, 0.0);
}

void check_engine_args(const TransferMatrix& u, std::span<const int> photon_modes, const OverlapMatrix& s) {
    if (photon_modes.empty()) throw DomainError("no photons");
    if (static_cast<int>(photon_modes.size()) != s.size()) {
        throw DimensionError("overlap matrix size " + std::to_string(s.size()) + " does not match photon count " +
                             std::to_string(photon_modes.size()));
    }
    for (int m : photon_modes) {
        if (m < 0 || m >= u.dim()) throw DimensionError("photon mode outside the transfer matrix");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// DelayConfig / OverlapMatrix
// ---------------------------------------------------------------------------

void DelayConfig::validate() const {
    if (!(spectral_width > 0.0) || !std::isfinite(spectral_width)) throw DomainError("spectral width must be positive");
    if (!(central_frequency >= 0.0)) throw DomainError("central frequency must be non-negative");
    for (double t : delays) {
        if (!std::isfinite(t)) throw DomainError("delays must be finite");
    }
}

double DelayConfig::overlap(int a, int b) const {
    const double dt = delays.at(static_cast<std::size_t>(a)) - delays.at(static_cast<std::size_t>(b));
    return std::exp(-0.5 * spectral_width * spectral_width * dt * dt);
}

double out_of_interference_delay(double spectral_width) {
    if (!(spectral_width > 0.0)) throw DomainError("spectral width must be positive");
    return std::sqrt(-2.0 * std::log(kOutOfInterferenceOverlap)) / spectral_width;
}

OverlapMatrix::OverlapMatrix(RealMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
        throw DimensionError("overlap matrix must be square and non-empty");
    }
    const Eigen::Index n = entries_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (entries_(i, i) != 1.0) throw DomainError("overlap matrix diagonal must be exactly 1");
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = entries_(i, j);
            if (!(v >= 0.0 && v <= 1.0)) throw DomainError("overlaps must lie in [0, 1]");
            if (v != entries_(j, i)) throw DomainError("overlap matrix must be symmetric");
        }
    }
    if (n > 1) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> eig(entries_, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -kPsdTolerance) {
            throw DomainError("overlap matrix is not positive semidefinite");
        }
    }
}

OverlapMatrix OverlapMatrix::from_delays(const DelayConfig& delays) {
    delays.validate();
    const int n = static_cast<int>(delays.delays.size());
    RealMatrix m(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) m(a, b) = (a == b) ? 1.0 : delays.overlap(a, b);
    }
    return OverlapMatrix(std::move(m));
}

OverlapMatrix OverlapMatrix::all_ones(int photons) {
    return OverlapMatrix(RealMatrix::Ones(photons, photons));
}

OverlapMatrix OverlapMatrix::identity(int photons) {
    return OverlapMatrix(RealMatrix::Identity(photons, photons));
}

OverlapMatrix OverlapMatrix::with_label_factor(std::span<const int> labels, double factor) const {
    if (static_cast<int>(labels.size()) != size()) throw DimensionError("one label per photon required");
    if (!(factor >= 0.0 && factor <= 1.0)) throw DomainError("label overlap factor must lie in [0, 1]");
    RealMatrix m = entries_;
    for (int a = 0; a < size(); ++a) {
        for (int b = 0; b < size(); ++b) {
            if (labels[static_cast<std::size_t>(a)] != labels[static_cast<std::size_t>(b)]) m(a, b) *= factor;
        }
    }
    return OverlapMatrix(std::move(m));
}

OverlapMatrix OverlapMatrix::without_interference(int photon) const {
    if (photon < 0 || photon >= size()) throw DimensionError("photon index out of range");
    RealMatrix m = entries_;
    for (int b = 0; b < size(); ++b) {
        if (b == photon) continue;
        m(photon, b) = 0.0;
        m(b, photon) = 0.0;
    }
    return OverlapMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

double hom_surface_closed_form(const FockOutcome& outcome, const DelayConfig& delays) {
    delays.validate();
    if (outcome.dim() != 3 || delays.delays.size() != 3) {
        throw DimensionError("closed forms describe three photons in a three-port device");
    }
    const double w2 = delays.spectral_width * delays.spectral_width;
    const double t1 = delays.delays[0];
    const double t2 = delays.delays[1];
    const double t3 = delays.delays[2];

    const double e12 = std::exp(-w2 * (t1 - t2) * (t1 - t2));
    const double e13 = std::exp(-w2 * (t1 - t3) * (t1 - t3));
    const double e23 = std::exp(-w2 * (t2 - t3) * (t2 - t3));
    const double e3 = std::exp(-w2 * (t1 * t1 + t2 * t2 + t3 * t3 - t1 * t2 - t1 * t3 - t2 * t3));

    const auto pattern = outcome.pattern();
    if (pattern == std::vector<int>{1, 1, 1}) return (2.0 - e12 - e13 - e23 + 4.0 * e3) / 9.0;
    if (pattern == std::vector<int>{2, 1, 0}) return (1.0 - e3) / 9.0;
    if (pattern == std::vector<int>{3, 0, 0}) return (1.0 + e12 + e13 + e23 + 2.0 * e3) / 27.0;
    throw DomainError("no closed form for outcome " + outcome.to_string());
}

// ---------------------------------------------------------------------------
// General engine
// ---------------------------------------------------------------------------

double labeled_photon_probability(const TransferMatrix& u, std::span<const int> photon_modes,
                                  const OverlapMatrix& overlaps, const FockOutcome& outcome) {
    check_engine_args(u, photon_modes, overlaps);
    if (outcome.dim() != u.dim()) throw DimensionError("outcome length does not match matrix dimension");
    if (outcome.total() != static_cast<int>(photon_modes.size())) {
        throw DomainError("outcome photon number differs from input photon number");
    }
    const auto perms = all_permutations(static_cast<int>(photon_modes.size()));
    const double norm = input_norm(photon_modes, overlaps, perms);
    return engine(u, photon_modes, overlaps, outcome, perms, norm);
}

OutcomeDistribution labeled_photon_distribution(const TransferMatrix& u, std::span<const int> photon_modes,
                                                const OverlapMatrix& overlaps, const EvolveOptions& options) {
    check_engine_args(u, photon_modes, overlaps);
    const int n = static_cast<int>(photon_modes.size());
    if (n > options.max_photons) {
        throw CapacityError(std::to_string(n) + " photons exceed the configured cap of " +
                            std::to_string(options.max_photons));
    }
    const auto perms = all_permutations(n);
    const double norm = input_norm(photon_modes, overlaps, perms);

    std::vector<OutcomeDistribution::Entry> entries;
    double total = 0.0;
    for (auto& outcome : enumerate_outcomes(u.dim(), n)) {
        const double p = engine(u, photon_modes, overlaps, outcome, perms, norm);
        total += p;
        entries.push_back({std::move(outcome), p});
    }
    if (!(total > 0.0)) throw DomainError("vanishing total probability");
    for (auto& e : entries) e.probability /= total;
    return OutcomeDistribution(n, std::move(entries), 1.0 - total);
}

double hom_probability_general(const TransferMatrix& u, const FockOutcome& input, const FockOutcome& outcome,
                               const OverlapMatrix& overlaps) {
    if (input.dim() != u.dim() || outcome.dim() != u.dim()) {
        throw DimensionError("occupation length does not match matrix dimension");
    }
    for (int n : input.occupations()) {
        if (n > 1) throw DomainError("wavepacket model supports at most one photon per input port");
    }
    if (input.total() != outcome.total()) throw DomainError("input and outcome photon numbers differ");
    const auto modes = input.photon_modes();
    return labeled_photon_probability(u, modes, overlaps, outcome);
}

double visibility_from_counts(double gamma_inf, double gamma_0) {
    if (!(gamma_inf > 0.0)) throw DomainError("visibility needs a positive out-of-interference rate");
    return (gamma_inf - gamma_0) / gamma_inf;
}

}  // namespace tritterlab
