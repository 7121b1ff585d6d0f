// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/fock.hpp>
#include <tritterlab/permanent.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace tritterlab {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double occupation_factorials(const FockOutcome& s) {
    double f = 1.0;
    for (int n : s.occupations()) f *= factorial(n);
    return f;
}

void validate_input(const TransferMatrix& u, const FockOutcome& input, const EvolveOptions& options,
                    const char* who) {
    if (input.dim() != u.dim()) {
        throw DimensionError(std::string(who) + ": input has " + std::to_string(input.dim()) +
                             " modes, matrix has " + std::to_string(u.dim()));
    }
    if (input.total() == 0) {
        throw DomainError(std::string(who) + ": input state carries no photons");
    }
    if (input.total() > options.max_photons) {
        throw CapacityError(std::string(who) + ": " + std::to_string(input.total()) +
                            " photons exceed the configured cap of " + std::to_string(options.max_photons));
    }
}

// Rows of U repeated per input occupation, columns per output occupation.
ComplexMatrix scattering_submatrix(const TransferMatrix& u, const FockOutcome& input, const FockOutcome& output) {
    const auto rows = input.photon_modes();
    const auto cols = output.photon_modes();
    ComplexMatrix sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = u(rows[r], cols[c]);
        }
    }
    return sub;
}

OutcomeDistribution renormalized(int photons, std::vector<OutcomeDistribution::Entry> entries) {
    double total = 0.0;
    for (const auto& e : entries) total += e.probability;
    if (!(total > 0.0)) throw DomainError("evolution produced a vanishing total probability");
    for (auto& e : entries) e.probability /= total;
    return OutcomeDistribution(photons, std::move(entries), 1.0 - total);
}

}  // namespace

// ---------------------------------------------------------------------------
// TransferMatrix
// ---------------------------------------------------------------------------

TransferMatrix::TransferMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw DimensionError("transfer matrix must be square");
    }
    if (entries_.rows() < 2) {
        throw DimensionError("transfer matrix needs at least two modes");
    }
    if (!entries_.allFinite()) {
        throw DomainError("transfer matrix has non-finite entries");
    }
    const ComplexMatrix gram = entries_ * entries_.adjoint() - ComplexMatrix::Identity(entries_.rows(), entries_.cols());
    unitary_deviation_ = gram.cwiseAbs().maxCoeff();
}

TransferMatrix TransferMatrix::unitary(ComplexMatrix entries, double tolerance) {
    TransferMatrix u(std::move(entries));
    if (!u.is_unitary(tolerance)) {
        std::ostringstream msg;
        msg << "matrix is not unitary: max|UU^+ - I| = " << u.unitary_deviation() << " > " << tolerance;
        throw DomainError(msg.str());
    }
    return u;
}

TransferMatrix TransferMatrix::identity(int dim) {
    return TransferMatrix(ComplexMatrix::Identity(dim, dim));
}

RealMatrix TransferMatrix::routing_probabilities() const {
    return entries_.cwiseAbs2();
}

TransferMatrix fourier_matrix(int dim) {
    ComplexMatrix m(dim, dim);
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % dim) / dim;
            m(j, k) = std::polar(norm, angle);
        }
    }
    return TransferMatrix::unitary(std::move(m));
}

TransferMatrix ideal_tritter() { return fourier_matrix(3); }

// ---------------------------------------------------------------------------
// FockOutcome
// ---------------------------------------------------------------------------

FockOutcome::FockOutcome(std::vector<int> occupations) : occ_(std::move(occupations)) {
    for (int n : occ_) {
        if (n < 0) throw DomainError("occupation numbers must be non-negative");
        total_ += n;
    }
}

FockOutcome::FockOutcome(std::initializer_list<int> occupations) : FockOutcome(std::vector<int>(occupations)) {}

std::vector<int> FockOutcome::photon_modes() const {
    std::vector<int> modes;
    modes.reserve(static_cast<std::size_t>(total_));
    for (int mode = 0; mode < dim(); ++mode) {
        for (int k = 0; k < occ_[static_cast<std::size_t>(mode)]; ++k) modes.push_back(mode);
    }
    return modes;
}

std::vector<int> FockOutcome::pattern() const {
    std::vector<int> p = occ_;
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

std::string FockOutcome::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < occ_.size(); ++i) {
        if (i != 0) out += ',';
        out += std::to_string(occ_[i]);
    }
    return out;
}

FockOutcome FockOutcome::parse(const std::string& text) {
    std::vector<int> occ;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        const auto first = token.find_first_not_of(" \t");
        const auto last = token.find_last_not_of(" \t");
        if (first == std::string::npos) throw DomainError("empty occupation in '" + text + "'");
        token = token.substr(first, last - first + 1);
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw DomainError("cannot parse occupation '" + token + "'");
        }
        if (used != token.size()) throw DomainError("cannot parse occupation '" + token + "'");
        occ.push_back(value);
    }
    if (occ.empty()) throw DomainError("empty outcome specification");
    return FockOutcome(std::move(occ));
}

std::vector<FockOutcome> enumerate_outcomes(int dim, int photons) {
    if (dim < 1 || photons < 0) throw DomainError("enumerate_outcomes: invalid arguments");
    std::vector<FockOutcome> out;
    std::vector<int> occ(static_cast<std::size_t>(dim), 0);
    // Depth-first with the first mode taking as many photons as possible first.
    std::function<void(int, int)> fill = [&](int mode, int remaining) {
        if (mode == dim - 1) {
            occ[static_cast<std::size_t>(mode)] = remaining;
            out.emplace_back(occ);
            return;
        }
        for (int n = remaining; n >= 0; --n) {
            occ[static_cast<std::size_t>(mode)] = n;
            fill(mode + 1, remaining - n);
        }
    };
    fill(0, photons);
    return out;
}

// ---------------------------------------------------------------------------
// OutcomeDistribution
// ---------------------------------------------------------------------------

OutcomeDistribution::OutcomeDistribution(int total_photons, std::vector<Entry> entries, double norm_deficit)
    : total_photons_(total_photons), entries_(std::move(entries)), norm_deficit_(norm_deficit) {
    for (const auto& e : entries_) {
        if (e.outcome.total() != total_photons_) {
            throw DomainError("outcome " + e.outcome.to_string() + " does not carry " +
                              std::to_string(total_photons_) + " photons");
        }
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.outcome > b.outcome; });
}

double OutcomeDistribution::probability(const FockOutcome& outcome) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), outcome,
                                     [](const Entry& e, const FockOutcome& o) { return e.outcome > o; });
    if (it != entries_.end() && it->outcome == outcome) return it->probability;
    return 0.0;
}

double OutcomeDistribution::sum() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.probability;
    return s;
}

// ---------------------------------------------------------------------------
// Evolution
// ---------------------------------------------------------------------------

Complex transition_amplitude(const TransferMatrix& u, const FockOutcome& input, const FockOutcome& output) {
    if (input.dim() != u.dim() || output.dim() != u.dim()) {
        throw DimensionError("transition_amplitude: occupation length does not match matrix dimension");
    }
    if (input.total() != output.total()) return Complex{0.0, 0.0};
    const Complex perm = permanent(scattering_submatrix(u, input, output));
    return perm / std::sqrt(occupation_factorials(input) * occupation_factorials(output));
}

OutcomeDistribution evolve_quantum(const TransferMatrix& u, const FockOutcome& input, const EvolveOptions& options) {
    validate_input(u, input, options, "evolve_quantum");
    const int n = input.total();
    const double input_norm = occupation_factorials(input);

    std::vector<OutcomeDistribution::Entry> entries;
    for (auto& output : enumerate_outcomes(u.dim(), n)) {
        const Complex perm = permanent(scattering_submatrix(u, input, output));
        const double p = std::norm(perm) / (input_norm * occupation_factorials(output));
        entries.push_back({std::move(output), p});
    }
    return renormalized(n, std::move(entries));
}

OutcomeDistribution evolve_classical(const TransferMatrix& u, const FockOutcome& input,
                                     const EvolveOptions& options) {
    validate_input(u, input, options, "evolve_classical");
    const RealMatrix routing = u.routing_probabilities();
    const int dim = u.dim();

    // Convolve one photon at a time: each photon leaves its input mode i
    // through output j with probability |U_ij|^2.
    std::map<std::vector<int>, double> current{{std::vector<int>(static_cast<std::size_t>(dim), 0), 1.0}};
    for (int mode : input.photon_modes()) {
        std::map<std::vector<int>, double> next;
        for (const auto& [occ, p] : current) {
            for (int j = 0; j < dim; ++j) {
                const double w = routing(mode, j);
                if (w == 0.0) continue;
                auto moved = occ;
                ++moved[static_cast<std::size_t>(j)];
                next[moved] += p * w;
            }
        }
        current = std::move(next);
    }

    std::vector<OutcomeDistribution::Entry> entries;
    for (auto& output : enumerate_outcomes(dim, input.total())) {
        const auto it = current.find(output.occupations());
        const double p = it == current.end() ? 0.0 : it->second;
        entries.push_back({std::move(output), p});
    }
    return renormalized(input.total(), std::move(entries));
}

ProbabilityRatio quantum_classical_ratio(const TransferMatrix& u, const FockOutcome& input,
                                         const FockOutcome& output, const EvolveOptions& options) {
    if (output.dim() != u.dim()) throw DimensionError("quantum_classical_ratio: output length mismatch");
    if (output.total() != input.total()) throw DomainError("quantum_classical_ratio: photon number mismatch");
    const double pq = evolve_quantum(u, input, options).probability(output);
    const double pcl = evolve_classical(u, input, options).probability(output);

    const bool q_zero = pq < kZeroProbability;
    const bool cl_zero = pcl < kZeroProbability;
    if (q_zero && cl_zero) return {ProbabilityRatio::Kind::undefined, std::numeric_limits<double>::quiet_NaN()};
    if (q_zero) return {ProbabilityRatio::Kind::suppressed, 0.0};
    if (cl_zero) return {ProbabilityRatio::Kind::divergent, std::numeric_limits<double>::infinity()};
    return {ProbabilityRatio::Kind::finite, pq / pcl};
}

}  // namespace tritterlab
