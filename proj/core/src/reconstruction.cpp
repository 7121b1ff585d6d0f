// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/reconstruction.hpp>
#include <tritterlab/optimize.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace tritterlab {

namespace {

constexpr int kModes = 3;
constexpr int kRawCount = kModes * kModes;
constexpr int kParamCount = kRawCount + 4;
// (row, col) of the four free phases, in parameter order
constexpr std::array<std::pair<int, int>, 4> kFreePhases{{{1, 1}, {1, 2}, {2, 1}, {2, 2}}};

double wrap_phase(double phi) {
    double w = std::remainder(phi, 2.0 * std::numbers::pi);
    if (w <= -std::numbers::pi) w += 2.0 * std::numbers::pi;
    return w;
}

std::optional<double> pair_visibility(const ComplexMatrix& u, ModePair in, ModePair out) {
    const Complex a = u(in.first, out.first) * u(in.second, out.second);
    const Complex b = u(in.first, out.second) * u(in.second, out.first);
    const double classical = std::norm(a) + std::norm(b);
    if (!(classical > 0.0)) return std::nullopt;
    return (classical - std::norm(a + b)) / classical;
}

// The raw moduli are squared and row-normalized, so every row of |U|^2 sums to one.
ComplexMatrix matrix_from_params(std::span<const double> x) {
    ComplexMatrix u(kModes, kModes);
    for (int i = 0; i < kModes; ++i) {
        double row = 0.0;
        for (int j = 0; j < kModes; ++j) row += x[static_cast<std::size_t>(i * kModes + j)] * x[static_cast<std::size_t>(i * kModes + j)];
        const double scale = row > 0.0 ? 1.0 / std::sqrt(row) : 0.0;
        for (int j = 0; j < kModes; ++j) u(i, j) = std::abs(x[static_cast<std::size_t>(i * kModes + j)]) * scale;
    }
    for (std::size_t p = 0; p < kFreePhases.size(); ++p) {
        const auto [i, j] = kFreePhases[p];
        u(i, j) *= std::polar(1.0, x[kRawCount + p]);
    }
    return u;
}

struct PreparedData {
    std::vector<std::pair<ModePair, ModePair>> index;
    std::vector<double> target;  // V^m / q
    std::vector<double> weight;  // 1 / sigma^2
    bool sigma_replaced = false;
};

PreparedData prepare(const VisibilityMatrix& measured, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("purity factor q must lie in (0, 1]");
    if (measured.dim() != kModes) throw DimensionError("fit_matrix reconstructs three-mode devices only");

    double smallest = std::numeric_limits<double>::infinity();
    for (const auto& e : measured.entries()) {
        if (e.sigma < 0.0) throw DomainError("negative visibility uncertainty");
        if (e.value && e.sigma > 0.0) smallest = std::min(smallest, e.sigma);
    }
    if (!std::isfinite(smallest)) smallest = 1.0;

    PreparedData data;
    for (const auto& e : measured.entries()) {
        if (!e.value) continue;
        double sigma = e.sigma;
        if (sigma == 0.0) {
            sigma = smallest;
            data.sigma_replaced = true;
        }
        data.index.emplace_back(e.inputs, e.outputs);
        data.target.push_back(*e.value / q);
        data.weight.push_back(1.0 / (sigma * sigma));
    }
    if (data.index.empty()) throw DomainError("no measured visibilities to fit");
    return data;
}

double objective(std::span<const double> x, const PreparedData& data, double column_penalty) {
    const ComplexMatrix u = matrix_from_params(x);
    double total = 0.0;
    for (std::size_t n = 0; n < data.index.size(); ++n) {
        const auto v = pair_visibility(u, data.index[n].first, data.index[n].second);
        if (!v) return 1e12;
        const double d = *v - data.target[n];
        total += d * d * data.weight[n];
    }
    for (int j = 0; j < kModes; ++j) {
        const double col = u.col(j).cwiseAbs2().sum() - 1.0;
        total += column_penalty * col * col;
    }
    return total;
}

struct RunOutcome {
    std::vector<double> x;
    double f = 0.0;
    bool converged = false;
};

RunOutcome descend(const Objective& f, std::vector<double> x, const FitOptions& options) {
    NelderMeadOptions nm;
    nm.max_evaluations = options.max_evaluations;
    nm.initial_step.assign(kParamCount, 0.0);
    for (int i = 0; i < kRawCount; ++i) nm.initial_step[static_cast<std::size_t>(i)] = 0.05 * std::max(std::abs(x[static_cast<std::size_t>(i)]), 0.05);
    for (int i = kRawCount; i < kParamCount; ++i) nm.initial_step[static_cast<std::size_t>(i)] = 0.1;

    auto result = nelder_mead(f, std::move(x), nm);
    RunOutcome best{result.x, result.f, result.converged};
    for (int round = 0; round < options.polish_rounds; ++round) {
        for (int i = 0; i < kRawCount; ++i) nm.initial_step[static_cast<std::size_t>(i)] = 0.01 * std::max(std::abs(best.x[static_cast<std::size_t>(i)]), 0.05);
        for (int i = kRawCount; i < kParamCount; ++i) nm.initial_step[static_cast<std::size_t>(i)] = 0.01;
        auto again = nelder_mead(f, best.x, nm);
        const bool improved = again.f < best.f * (1.0 - 1e-10) && again.f < best.f - 1e-300;
        if (again.f <= best.f) best = {again.x, again.f, again.converged};
        if (!improved) break;
    }
    return best;
}

double phase_distance(std::span<const double> x, const RealMatrix& reference) {
    double d = 0.0;
    for (std::size_t p = 0; p < kFreePhases.size(); ++p) {
        const auto [i, j] = kFreePhases[p];
        d += std::abs(wrap_phase(x[kRawCount + p] - reference(i, j)));
    }
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// VisibilityMatrix
// ---------------------------------------------------------------------------

ModePair::ModePair(int a, int b) : first(std::min(a, b)), second(std::max(a, b)) {
    if (a == b) throw DomainError("a mode pair needs two distinct modes");
    if (first < 0) throw DomainError("mode indices must be non-negative");
}

VisibilityMatrix::VisibilityMatrix(int dim) : dim_(dim) {
    if (dim < 2) throw DimensionError("visibility matrices need at least two modes");
    for (int i = 0; i < dim; ++i) {
        for (int j = i + 1; j < dim; ++j) pairs_.emplace_back(i, j);
    }
    for (const auto& in : pairs_) {
        for (const auto& out : pairs_) entries_.push_back({in, out, std::nullopt, 0.0});
    }
}

std::size_t VisibilityMatrix::index_of(ModePair p) const {
    if (p.second >= dim_) throw DimensionError("mode index outside the visibility matrix");
    const auto it = std::find(pairs_.begin(), pairs_.end(), p);
    return static_cast<std::size_t>(it - pairs_.begin());
}

const VisibilityMatrix::Entry& VisibilityMatrix::at(ModePair inputs, ModePair outputs) const {
    return entries_[index_of(inputs) * pairs_.size() + index_of(outputs)];
}

VisibilityMatrix::Entry& VisibilityMatrix::at(ModePair inputs, ModePair outputs) {
    return entries_[index_of(inputs) * pairs_.size() + index_of(outputs)];
}

void VisibilityMatrix::set(int i, int j, int k, int l, std::optional<double> value, double sigma) {
    if (sigma < 0.0) throw DomainError("sigma must be non-negative");
    auto& e = at({i, j}, {k, l});
    e.value = value;
    e.sigma = sigma;
}

bool VisibilityMatrix::complete() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.value.has_value(); });
}

// ---------------------------------------------------------------------------
// Forward model and helpers
// ---------------------------------------------------------------------------

VisibilityMatrix predict_visibilities(const TransferMatrix& u) {
    VisibilityMatrix v(u.dim());
    for (auto& e : v.entries()) e.value = pair_visibility(u.entries(), e.inputs, e.outputs);
    return v;
}

RealMatrix moduli_from_singles(const SinglesCounts& c) {
    if (c.counts.rows() != c.counts.cols() || c.counts.rows() < 2) throw DimensionError("singles counts must be square");
    if ((c.counts.array() < 0.0).any() || !c.counts.allFinite()) throw DomainError("counts must be finite and non-negative");
    RealMatrix out = c.counts;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double row = out.row(i).sum();
        if (!(row > 0.0)) throw DomainError("input port " + std::to_string(i + 1) + " recorded no counts");
        out.row(i) /= row;
    }
    return out;
}

RealMatrix ideal_tritter_phases() {
    const double third = 2.0 * std::numbers::pi / 3.0;
    RealMatrix phi = RealMatrix::Zero(3, 3);
    phi(1, 1) = third;
    phi(1, 2) = 2.0 * third;
    phi(2, 1) = 2.0 * third;
    phi(2, 2) = 4.0 * third;
    return phi;
}

TransferMatrix gauge_fix(const TransferMatrix& u) {
    ComplexMatrix m = u.entries();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (std::abs(m(i, 0)) > 0.0) m.row(i) *= std::polar(1.0, -std::arg(m(i, 0)));
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (std::abs(m(0, j)) > 0.0) m.col(j) *= std::polar(1.0, -std::arg(m(0, j)));
    }
    return TransferMatrix(std::move(m));
}

double visibility_misfit(const TransferMatrix& candidate, const VisibilityMatrix& measured, double q) {
    const PreparedData data = prepare(measured, q);
    const RealMatrix zero = RealMatrix::Zero(kModes, kModes);
    std::vector<double> x(kParamCount);
    const TransferMatrix fixed = gauge_fix(candidate);
    for (int i = 0; i < kModes; ++i) {
        for (int j = 0; j < kModes; ++j) x[static_cast<std::size_t>(i * kModes + j)] = std::abs(fixed(i, j));
    }
    for (std::size_t p = 0; p < kFreePhases.size(); ++p) {
        const auto [i, j] = kFreePhases[p];
        x[kRawCount + p] = std::arg(fixed(i, j));
    }
    return objective(x, data, 0.0);
}

double similarity(const VisibilityMatrix& a, const VisibilityMatrix& b, double q) {
    if (a.dim() != b.dim()) throw DimensionError("visibility matrices have different dimensions");
    double total = 0.0;
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    for (std::size_t n = 0; n < ea.size(); ++n) {
        if (!ea[n].value || !eb[n].value) throw DomainError("similarity is undefined when a visibility is undefined");
        total += std::abs(q * *ea[n].value - *eb[n].value);
    }
    return 1.0 - total / (2.0 * static_cast<double>(ea.size()));
}

// ---------------------------------------------------------------------------
// Fit
// ---------------------------------------------------------------------------

ReconstructionResult fit_matrix(const VisibilityMatrix& measured, const RealMatrix& routing0, double q,
                                const FitOptions& options) {
    const PreparedData data = prepare(measured, q);
    if (routing0.rows() != kModes || routing0.cols() != kModes) throw DimensionError("starting moduli must be 3x3");
    if ((routing0.array() < 0.0).any() || !routing0.allFinite()) throw DomainError("starting moduli must be non-negative");
    if (options.restarts < 0) throw DomainError("restart count must be non-negative");

    const Objective f = [&](std::span<const double> x) { return objective(x, data, options.column_penalty); };
    const RealMatrix start_phases = ideal_tritter_phases();

    std::vector<double> x0(kParamCount);
    for (int i = 0; i < kModes; ++i) {
        for (int j = 0; j < kModes; ++j) x0[static_cast<std::size_t>(i * kModes + j)] = std::sqrt(routing0(i, j));
    }
    for (std::size_t p = 0; p < kFreePhases.size(); ++p) {
        const auto [i, j] = kFreePhases[p];
        x0[kRawCount + p] = start_phases(i, j);
    }

    ReconstructionResult result;
    result.purity_q = q;
    result.sigma_replaced = data.sigma_replaced;
    result.initial_residual = f(x0);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> uniform_phase(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> jitter(-options.modulus_jitter, options.modulus_jitter);

    RunOutcome best{x0, result.initial_residual, false};
    for (int run = 0; run <= options.restarts; ++run) {
        std::vector<double> start = x0;
        if (run > 0) {
            for (int i = 0; i < kRawCount; ++i) start[static_cast<std::size_t>(i)] *= 1.0 + jitter(rng);
            for (int i = kRawCount; i < kParamCount; ++i) start[static_cast<std::size_t>(i)] = uniform_phase(rng);
        }
        RunOutcome outcome = descend(f, std::move(start), options);
        ++result.runs;
        if (outcome.converged) ++result.converged_runs;
        if (outcome.f < best.f || (run == 0 && outcome.f <= best.f)) best = std::move(outcome);
    }
    if (result.converged_runs == 0) {
        throw FitError("fit did not converge in " + std::to_string(result.runs) + " runs; data may be ill-conditioned");
    }

    // Conjugation leaves every visibility unchanged; keep the branch nearest the start.
    std::vector<double> conjugate = best.x;
    for (int i = kRawCount; i < kParamCount; ++i) conjugate[static_cast<std::size_t>(i)] = -conjugate[static_cast<std::size_t>(i)];
    if (phase_distance(conjugate, start_phases) < phase_distance(best.x, start_phases)) best.x = std::move(conjugate);
    for (int i = kRawCount; i < kParamCount; ++i) best.x[static_cast<std::size_t>(i)] = wrap_phase(best.x[static_cast<std::size_t>(i)]);

    const ComplexMatrix u = matrix_from_params(best.x);
    result.matrix = TransferMatrix(u);
    result.moduli = u.cwiseAbs();
    result.phases = RealMatrix::Zero(kModes, kModes);
    for (std::size_t p = 0; p < kFreePhases.size(); ++p) {
        const auto [i, j] = kFreePhases[p];
        result.phases(i, j) = best.x[kRawCount + p];
    }
    result.residual = f(best.x);
    return result;
}

// ---------------------------------------------------------------------------
// Bootstrap
// ---------------------------------------------------------------------------

Uncertainties bootstrap_uncertainties(const VisibilityMatrix& measured, const RealMatrix& routing0, double q, int runs,
                                      const FitOptions& options) {
    if (runs < 2) throw DomainError("bootstrap needs at least two runs");
    const ReconstructionResult central = fit_matrix(measured, routing0, q, options);

    struct Sample {
        bool ok = false;
        RealMatrix moduli;
        RealMatrix phases;
    };
    std::vector<Sample> samples(static_cast<std::size_t>(runs));

    auto work = [&](int run) {
        std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(run) + 1};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> gauss(0.0, 1.0);
        VisibilityMatrix noisy = measured;
        for (auto& e : noisy.entries()) {
            const double z = gauss(rng);
            if (e.value) e.value = *e.value + e.sigma * z;
        }
        Sample s;
        try {
            const auto fit = fit_matrix(noisy, routing0, q, options);
            s.ok = true;
            s.moduli = fit.moduli;
            s.phases = fit.phases;
        } catch (const FitError&) {
            s.ok = false;
        }
        samples[static_cast<std::size_t>(run)] = std::move(s);
    };

    int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, runs);
    std::vector<std::future<void>> workers;
    for (int t = 0; t < threads; ++t) {
        workers.push_back(std::async(std::launch::async, [&, t] {
            for (int run = t; run < runs; run += threads) work(run);
        }));
    }
    for (auto& w : workers) w.get();

    Uncertainties u;
    u.runs = runs;
    RealMatrix sum_m = RealMatrix::Zero(kModes, kModes), sum_m2 = sum_m;
    RealMatrix sum_p = sum_m, sum_p2 = sum_m;
    int ok = 0;
    for (const auto& s : samples) {
        if (!s.ok) {
            ++u.failures;
            continue;
        }
        ++ok;
        const RealMatrix dm = s.moduli - central.moduli;
        RealMatrix dp(kModes, kModes);
        for (int i = 0; i < kModes; ++i) {
            for (int j = 0; j < kModes; ++j) dp(i, j) = wrap_phase(s.phases(i, j) - central.phases(i, j));
        }
        sum_m += dm;
        sum_m2 += dm.cwiseAbs2();
        sum_p += dp;
        sum_p2 += dp.cwiseAbs2();
    }
    if (4 * u.failures > runs) {
        throw FitError("bootstrap unstable: " + std::to_string(u.failures) + " of " + std::to_string(runs) +
                       " refits failed");
    }
    if (ok < 2) throw FitError("bootstrap needs at least two successful refits");
    auto sd = [ok](const RealMatrix& s1, const RealMatrix& s2) {
        RealMatrix var = (s2 - s1.cwiseAbs2() / ok) / (ok - 1);
        return RealMatrix(var.cwiseMax(0.0).cwiseSqrt());
    };
    u.moduli = sd(sum_m, sum_m2);
    u.phases = sd(sum_p, sum_p2);
    return u;
}

}  // namespace tritterlab
