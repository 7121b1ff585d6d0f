// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations used only by the tests. They share no code with
// the library and favour obviousness over speed.

#pragma once

#include <tritterlab/fock.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using tritterlab::Complex;
using tritterlab::ComplexMatrix;
using tritterlab::RealMatrix;
using Occupation = std::vector<int>;

inline double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

/// Sum over all n! permutations.
inline Complex naive_permanent(const ComplexMatrix& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    Complex total{0.0, 0.0};
    do {
        Complex term{1.0, 0.0};
        for (int i = 0; i < n; ++i) term *= m(i, sigma[static_cast<std::size_t>(i)]);
        total += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return n == 0 ? Complex{1.0, 0.0} : total;
}

/// Expands prod_i (sum_j U_ij b_j^dag)^{n_i} / sqrt(n_i!) |0> term by term and
/// reads off |coefficient|^2 prod_j m_j! for every output occupation m.
inline std::map<Occupation, double> symbolic_quantum(const ComplexMatrix& u, const Occupation& input) {
    const int dim = static_cast<int>(u.rows());
    std::map<Occupation, Complex> poly{{Occupation(static_cast<std::size_t>(dim), 0), Complex{1.0, 0.0}}};
    double norm = 1.0;
    for (int i = 0; i < dim; ++i) {
        for (int rep = 0; rep < input[static_cast<std::size_t>(i)]; ++rep) {
            std::map<Occupation, Complex> next;
            for (const auto& [occ, c] : poly) {
                for (int j = 0; j < dim; ++j) {
                    auto moved = occ;
                    ++moved[static_cast<std::size_t>(j)];
                    next[moved] += c * u(i, j);
                }
            }
            poly = std::move(next);
        }
        norm *= factorial(input[static_cast<std::size_t>(i)]);
    }
    std::map<Occupation, double> out;
    for (const auto& [occ, c] : poly) {
        double f = 1.0;
        for (int m : occ) f *= factorial(m);
        out[occ] = std::norm(c) * f / norm;
    }
    return out;
}

/// Routes every labelled photon independently over all dim^n paths.
inline std::map<Occupation, double> routing_enumeration(const ComplexMatrix& u, const Occupation& input) {
    const int dim = static_cast<int>(u.rows());
    std::vector<int> photons;
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < input[static_cast<std::size_t>(i)]; ++k) photons.push_back(i);
    }
    std::map<Occupation, double> out;
    std::vector<int> route(photons.size(), 0);
    while (true) {
        double p = 1.0;
        Occupation occ(static_cast<std::size_t>(dim), 0);
        for (std::size_t k = 0; k < photons.size(); ++k) {
            p *= std::norm(u(photons[k], route[k]));
            ++occ[static_cast<std::size_t>(route[k])];
        }
        out[occ] += p;
        std::size_t k = 0;
        while (k < route.size() && ++route[k] == dim) route[k++] = 0;
        if (k == route.size()) break;
    }
    return out;
}

/// Photons entering ports 1 and 3 with amplitude overlap s, plus a photon in
/// port 2 that interferes with neither. Two-photon formulas times the
/// independent routing of the third photon.
inline double two_plus_one(const ComplexMatrix& u, const tritterlab::FockOutcome& o, double s) {
    double total = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (o[j] == 0) continue;
        std::vector<int> cols;
        for (int m = 0; m < 3; ++m) {
            for (int c = 0; c < o[m] - (m == j ? 1 : 0); ++c) cols.push_back(m);
        }
        const int k = cols[0], l = cols[1];
        double p2 = 0.0;
        if (k == l) {
            p2 = std::norm(u(0, k) * u(2, k)) * (1.0 + s * s);
        } else {
            const Complex a = u(0, k) * u(2, l);
            const Complex b = u(0, l) * u(2, k);
            p2 = std::norm(a) + std::norm(b) + 2.0 * s * s * (a * std::conj(b)).real();
        }
        total += std::norm(u(1, j)) * p2;
    }
    return total;
}

/// Non-resolving detection by brute force over every photon's fate: lost, or
/// one of the detectors of its output. An output with target m >= 2 has three
/// detectors, otherwise one; it passes when at least m of them fire.
inline double click_enumeration(const tritterlab::FockOutcome& arrived, const tritterlab::FockOutcome& target, double eta) {
    double p = 1.0;
    for (int j = 0; j < arrived.dim(); ++j) {
        const int need = target[j];
        if (need == 0) continue;
        const int d = need >= 2 ? 3 : 1;
        const int n = arrived[j];
        std::vector<int> fate(static_cast<std::size_t>(n), 0);  // 0 = lost, 1..d = detector
        double pass = 0.0;
        while (true) {
            double w = 1.0;
            std::vector<bool> fired(static_cast<std::size_t>(d), false);
            for (int f : fate) {
                w *= f == 0 ? 1.0 - eta : eta / d;
                if (f > 0) fired[static_cast<std::size_t>(f - 1)] = true;
            }
            if (std::count(fired.begin(), fired.end(), true) >= need) pass += w;
            std::size_t k = 0;
            while (k < fate.size() && ++fate[k] > d) fate[k++] = 0;
            if (k == fate.size()) break;
        }
        p *= pass;
    }
    return p;
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the R-diagonal phases removed.
template <class Rng>
ComplexMatrix random_unitary(int dim, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) z(i, j) = Complex{g(rng), g(rng)};
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

template <class Rng>
ComplexMatrix random_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix z(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) z(i, j) = Complex{g(rng), g(rng)};
    }
    return z;
}

/// exp(-i C z) for the symmetric three-guide coupling matrix C = beta I + k (J - I),
/// by Eigen's Pade scaling-and-squaring.
inline ComplexMatrix coupler_exponential(double k, double beta, double z) {
    ComplexMatrix c = ComplexMatrix::Constant(3, 3, Complex{k, 0.0});
    c.diagonal().setConstant(Complex{beta, 0.0});
    const ComplexMatrix generator = Complex{0.0, -z} * c;
    return generator.exp();
}

/// Alternating row/column normalization to a doubly stochastic matrix.
inline RealMatrix sinkhorn(RealMatrix m, int iterations = 10000) {
    for (int it = 0; it < iterations; ++it) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
        for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) /= m.col(j).sum();
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
    return m;
}

/// Two-photon visibility straight from the P^C, P^Q path sums.
inline double pair_visibility(const ComplexMatrix& u, int i, int j, int k, int l) {
    const Complex a = u(i, k) * u(j, l);
    const Complex b = u(i, l) * u(j, k);
    const double pc = std::norm(a) + std::norm(b);
    return (pc - std::norm(a + b)) / pc;
}

/// Probability of n photons or fewer for a Poisson variable of mean mu.
inline double poisson_cdf(double mu, int n) {
    double term = std::exp(-mu), sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        sum += term;
        term *= mu / (k + 1);
    }
    return sum;
}

inline ComplexMatrix polar(const RealMatrix& moduli, const RealMatrix& phases) {
    ComplexMatrix m(moduli.rows(), moduli.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = std::polar(moduli(i, j), phases(i, j));
    }
    return m;
}

/// The two reconstructed matrices as printed for the device (795 nm, 785 nm).
inline ComplexMatrix printed_u795() {
    RealMatrix mod(3, 3), ph(3, 3);
    mod << 0.593, 0.5928, 0.5444, 0.5489, 0.5811, 0.6008, 0.5886, 0.5575, 0.5853;
    ph << 0, 0, 0, 0, 2.123, -2.030, 0, -2.167, 2.110;
    return polar(mod, ph);
}

inline ComplexMatrix printed_u785() {
    RealMatrix mod(3, 3), ph(3, 3);
    mod << 0.656, 0.5439, 0.5233, 0.5302, 0.6135, 0.5852, 0.5371, 0.5725, 0.6194;
    ph << 0, 0, 0, 0, 2.210, -2.077, 0, -2.128, 2.188;
    return polar(mod, ph);
}

/// Visibility pairs in (input pair, output pair) row-major order, 0-based.
inline std::vector<std::array<int, 4>> visibility_indices() {
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    std::vector<std::array<int, 4>> out;
    for (const auto& in : pairs) {
        for (const auto& o : pairs) out.push_back({in[0], in[1], o[0], o[1]});
    }
    return out;
}

}  // namespace oracle
