// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/classical_bounds.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace tritterlab {

namespace {

constexpr std::int64_t kChunkSamples = 1 << 16;

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void check_args(const TransferMatrix& u, const CoherentInput& a, const FockOutcome& outcome,
                const Scenario& scenario) {
    a.validate();
    if (static_cast<int>(a.amplitudes.size()) != u.dim()) throw DimensionError("one amplitude per input port required");
    if (outcome.dim() != u.dim()) throw DimensionError("outcome length does not match matrix dimension");
    switch (scenario.kind) {
        case Scenario::Kind::all_interfering:
        case Scenario::Kind::two_delayed:
            break;
        case Scenario::Kind::one_delayed:
            if (scenario.port < 0 || scenario.port >= u.dim()) throw DomainError("delayed port out of range");
            break;
        default:
            throw DomainError("unknown scenario");
    }
}

// Fixed-phase probability without argument checks; the averaging loops call this.
double probability_at(const ComplexMatrix& u, const std::vector<Complex>& alpha, const std::vector<int>& occ,
                      const Scenario& scenario) {
    const Eigen::Index n = u.rows();
    double exponent = 0.0;
    double log_p = 0.0;
    for (Eigen::Index out = 0; out < n; ++out) {
        Complex coherent{0.0, 0.0};
        for (Eigen::Index in = 0; in < n; ++in) coherent += u(in, out) * alpha[static_cast<std::size_t>(in)];
        exponent += std::norm(coherent);

        double intensity = 0.0;
        switch (scenario.kind) {
            case Scenario::Kind::all_interfering:
                intensity = std::norm(coherent);
                break;
            case Scenario::Kind::one_delayed: {
                const Complex late = u(scenario.port, out) * alpha[static_cast<std::size_t>(scenario.port)];
                intensity = std::norm(coherent - late) + std::norm(late);
                break;
            }
            case Scenario::Kind::two_delayed:
                for (Eigen::Index in = 0; in < n; ++in) {
                    intensity += std::norm(u(in, out) * alpha[static_cast<std::size_t>(in)]);
                }
                break;
        }
        const int m = occ[static_cast<std::size_t>(out)];
        if (m == 0) continue;
        if (intensity == 0.0) return 0.0;
        log_p += m * std::log(intensity) - log_factorial(m);
    }
    return std::exp(log_p - exponent);
}

std::vector<Complex> rotated(const std::vector<Complex>& alpha, const double* theta) {
    std::vector<Complex> out(alpha.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = std::abs(alpha[i]) * std::polar(1.0, theta[i]);
    return out;
}

PhaseAverage quadrature_average(const ComplexMatrix& u, const std::vector<Complex>& alpha,
                                const std::vector<int>& occ, const Scenario& scenario, int nodes) {
    const std::size_t ports = alpha.size();
    const double step = 2.0 * std::numbers::pi / nodes;
    std::vector<int> idx(ports, 0);
    std::vector<double> theta(ports, 0.0);
    double sum = 0.0;
    std::int64_t count = 0;
    while (true) {
        for (std::size_t i = 0; i < ports; ++i) theta[i] = step * idx[i];
        sum += probability_at(u, rotated(alpha, theta.data()), occ, scenario);
        ++count;
        std::size_t k = 0;
        while (k < ports && ++idx[k] == nodes) idx[k++] = 0;
        if (k == ports) break;
    }
    return {sum / static_cast<double>(count), 0.0};
}

PhaseAverage monte_carlo_average(const ComplexMatrix& u, const std::vector<Complex>& alpha,
                                 const std::vector<int>& occ, const Scenario& scenario,
                                 const AveragingMethod& method) {
    const std::int64_t chunks = (method.samples + kChunkSamples - 1) / kChunkSamples;
    struct Partial {
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::vector<Partial> partials(static_cast<std::size_t>(chunks));

    auto run_chunk = [&](std::int64_t chunk) {
        std::seed_seq seq{static_cast<std::uint64_t>(method.seed), static_cast<std::uint64_t>(chunk)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        const std::int64_t begin = chunk * kChunkSamples;
        const std::int64_t end = std::min(begin + kChunkSamples, method.samples);
        std::vector<double> theta(alpha.size());
        Partial p;
        for (std::int64_t s = begin; s < end; ++s) {
            for (auto& t : theta) t = phase(rng);
            const double v = probability_at(u, rotated(alpha, theta.data()), occ, scenario);
            p.sum += v;
            p.sum_sq += v * v;
        }
        partials[static_cast<std::size_t>(chunk)] = p;
    };

    int threads = method.threads > 0 ? method.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = static_cast<int>(std::clamp<std::int64_t>(threads, 1, chunks));
    std::vector<std::future<void>> workers;
    for (int t = 0; t < threads; ++t) {
        workers.push_back(std::async(std::launch::async, [&, t] {
            for (std::int64_t c = t; c < chunks; c += threads) run_chunk(c);
        }));
    }
    for (auto& w : workers) w.get();

    // chunk order, independent of the thread count
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& p : partials) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const auto n = static_cast<double>(method.samples);
    const double mean = sum / n;
    const double var = n > 1.0 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

}  // namespace

CoherentInput CoherentInput::equal(double modulus, int ports) {
    return {std::vector<Complex>(static_cast<std::size_t>(ports), Complex{modulus, 0.0}), true};
}

void CoherentInput::validate() const {
    if (amplitudes.empty()) throw DomainError("no coherent amplitudes given");
    for (const auto& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("coherent amplitudes must be finite");
    }
}

AveragingMethod AveragingMethod::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto number = [&](long long fallback) -> long long {
        if (arg.empty()) return fallback;
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(arg, &used);
        } catch (const std::exception&) {
            throw DomainError("bad averaging parameter '" + arg + "'");
        }
        if (used != arg.size()) throw DomainError("bad averaging parameter '" + arg + "'");
        return v;
    };
    if (kind == "quad") return quadrature(static_cast<int>(number(32)));
    if (kind == "mc") return monte_carlo(number(1000000));
    throw DomainError("unknown averaging method '" + text + "' (expected quad:N or mc:N)");
}

double coherent_outcome_probability(const TransferMatrix& u, const CoherentInput& a, const FockOutcome& outcome,
                                    const Scenario& scenario) {
    check_args(u, a, outcome, scenario);
    return probability_at(u.entries(), a.amplitudes, outcome.occupations(), scenario);
}

PhaseAverage phase_averaged_probability(const TransferMatrix& u, const CoherentInput& a, const FockOutcome& outcome,
                                        const Scenario& scenario, const AveragingMethod& method) {
    check_args(u, a, outcome, scenario);
    if (!a.phase_randomized) return {probability_at(u.entries(), a.amplitudes, outcome.occupations(), scenario), 0.0};
    switch (method.kind) {
        case AveragingMethod::Kind::quadrature:
            if (method.nodes < 1) throw DomainError("quadrature needs at least one node per phase");
            return quadrature_average(u.entries(), a.amplitudes, outcome.occupations(), scenario, method.nodes);
        case AveragingMethod::Kind::monte_carlo:
            if (method.samples < 1) throw DomainError("Monte Carlo needs at least one sample");
            return monte_carlo_average(u.entries(), a.amplitudes, outcome.occupations(), scenario, method);
    }
    throw DomainError("unknown averaging method");
}

ClassicalVisibility classical_visibility(const TransferMatrix& u, const CoherentInput& a, const FockOutcome& outcome,
                                         const DelayedSpec& delayed, const AveragingMethod& method) {
    for (int p : delayed.ports) {
        if (p < 0 || p >= u.dim()) throw DomainError("delayed port out of range");
    }
    Scenario at_inf, at_zero;
    if (delayed.ports.size() == 1) {
        at_inf = Scenario::one_delayed(delayed.ports[0]);
        at_zero = Scenario::all_interfering();
    } else if (delayed.ports.size() == 2 && delayed.ports[0] != delayed.ports[1]) {
        at_inf = Scenario::two_delayed();
        at_zero = Scenario::one_delayed(delayed.ports[0]);
    } else {
        throw DomainError("delay specification needs one port or two distinct ports");
    }

    ClassicalVisibility out;
    out.gamma_inf = phase_averaged_probability(u, a, outcome, at_inf, method);
    out.gamma_0 = phase_averaged_probability(u, a, outcome, at_zero, method);
    if (!(out.gamma_inf.mean > 0.0)) throw DomainError("out-of-interference rate vanishes; visibility undefined");
    out.visibility = (out.gamma_inf.mean - out.gamma_0.mean) / out.gamma_inf.mean;
    return out;
}

BoundSweep classical_bound_sweep(const TransferMatrix& u, const FockOutcome& outcome, const DelayedSpec& delayed,
                                 const AveragingMethod& method, double lo, double hi, int steps) {
    if (steps < 1 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("invalid amplitude sweep");
    BoundSweep sweep;
    for (int s = 0; s < steps; ++s) {
        const double modulus = steps == 1 ? lo : lo + (hi - lo) * s / (steps - 1);
        const auto v = classical_visibility(u, CoherentInput::equal(modulus, u.dim()), outcome, delayed, method);
        sweep.moduli.push_back(modulus);
        sweep.visibilities.push_back(v.visibility);
        if (s == 0 || std::abs(v.visibility) > sweep.supremum) {
            sweep.supremum = std::abs(v.visibility);
            sweep.supremum_modulus = modulus;
        }
    }
    return sweep;
}

}  // namespace tritterlab
