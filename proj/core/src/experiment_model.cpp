// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/experiment_model.hpp>
#include <tritterlab/interference.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <future>

namespace tritterlab {

namespace {

constexpr int kPorts = 3;

void require_three_modes(const TransferMatrix& u) {
    if (u.dim() != kPorts) throw DimensionError("the experiment model describes a three-port device");
}

void require_supported(const FockOutcome& target) {
    if (target.dim() != kPorts || target.total() != 3) throw DomainError("four-fold detection needs a three-photon outcome");
    const auto pat = target.pattern();
    if (pat != std::vector<int>{1, 1, 1} && pat != std::vector<int>{2, 1, 0} && pat != std::vector<int>{3, 0, 0}) {
        throw DomainError("unsupported outcome class " + target.to_string());
    }
}

// Photons of ports in `delayed` only overlap with photons of the same port.
RealMatrix apply_delays(RealMatrix s, const std::vector<int>& photon_modes, const std::vector<int>& delayed) {
    auto is_delayed = [&](int port) { return std::find(delayed.begin(), delayed.end(), port) != delayed.end(); };
    const auto n = static_cast<Eigen::Index>(photon_modes.size());
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const int pa = photon_modes[static_cast<std::size_t>(a)];
            const int pb = photon_modes[static_cast<std::size_t>(b)];
            if (pa != pb && (is_delayed(pa) || is_delayed(pb))) s(a, b) = 0.0;
        }
    }
    return s;
}

// Probability that n photons spread evenly over d detectors of efficiency eta
// fire at least `need` of them.
double cascade_clicks(int n, int d, int need, double eta) {
    if (need == 0) return 1.0;
    std::vector<double> state(static_cast<std::size_t>(1) << d, 0.0);
    state[0] = 1.0;
    for (int photon = 0; photon < n; ++photon) {
        std::vector<double> next(state.size(), 0.0);
        for (std::size_t mask = 0; mask < state.size(); ++mask) {
            if (state[mask] == 0.0) continue;
            next[mask] += state[mask] * (1.0 - eta);
            for (int det = 0; det < d; ++det) next[mask | (std::size_t{1} << det)] += state[mask] * eta / d;
        }
        state = std::move(next);
    }
    double p = 0.0;
    for (std::size_t mask = 0; mask < state.size(); ++mask) {
        if (std::popcount(mask) >= need) p += state[mask];
    }
    return p;
}

double trigger_click(int photons, double eta) { return 1.0 - std::pow(1.0 - eta, photons); }

struct SixPhotonBranch {
    int trigger_photons = 0;
    OutcomeDistribution distribution;
};

// Branches |k, 3-k, k>|3-k>_T, k = 0, 1, 2, that can fire the trigger and three
// output detectors. Photon i of port 1 shares its pair with photon i of port 3;
// port 2 photon j shares its pair with trigger photon j.
std::vector<SixPhotonBranch> six_photon_branches(const TransferMatrix& u, double p, const std::vector<int>& delayed) {
    auto branch = [&u, p, &delayed](int k) {
        std::vector<int> modes;
        std::vector<int> labels;
        for (int i = 0; i < k; ++i) {
            modes.push_back(0);
            labels.push_back(i);
        }
        for (int j = 0; j < 3 - k; ++j) {
            modes.push_back(1);
            labels.push_back(3 + j);
        }
        for (int i = 0; i < k; ++i) {
            modes.push_back(2);
            labels.push_back(i);
        }
        const auto n = static_cast<Eigen::Index>(modes.size());
        RealMatrix s(n, n);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) s(a, b) = labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(b)] ? 1.0 : p;
        }
        const OverlapMatrix overlaps(apply_delays(std::move(s), modes, delayed));
        return SixPhotonBranch{3 - k, labeled_photon_distribution(u, modes, overlaps)};
    };
    std::vector<std::future<SixPhotonBranch>> jobs;
    for (int k = 0; k < 3; ++k) jobs.push_back(std::async(std::launch::async, branch, k));
    std::vector<SixPhotonBranch> out;
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

double six_photon_rate(const std::vector<SixPhotonBranch>& branches, const FockOutcome& target, double g, double eta) {
    double total = 0.0;
    for (const auto& b : branches) total += detect_fourfold(b.distribution, target, eta, b.trigger_photons);
    return g * g * total;
}

}  // namespace

void SourceModel::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("q must lie in (0, 1]");
    if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("g must be finite and non-negative");
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
}

void MeasurementScenario::validate() const {
    if (outcome.dim() != kPorts || outcome.total() != 3) {
        throw DomainError("scenario outcome must place three photons in three modes");
    }
}

DelayCase parse_delay_case(const std::string& text) {
    if (text == "none") return DelayCase::none;
    if (text == "A" || text == "a") return DelayCase::A;
    if (text == "B" || text == "b") return DelayCase::B;
    if (text == "C" || text == "c") return DelayCase::C;
    throw DomainError("unknown scenario '" + text + "' (expected none, A, B or C)");
}

std::string to_string(DelayCase c) {
    switch (c) {
        case DelayCase::none: return "none";
        case DelayCase::A: return "A";
        case DelayCase::B: return "B";
        case DelayCase::C: return "C";
    }
    return "?";
}

std::vector<int> delayed_ports(DelayCase c, Arm arm) {
    const bool inf = arm == Arm::out_of_interference;
    switch (c) {
        case DelayCase::none:
            if (inf) throw DomainError("scenario 'none' has no out-of-interference arm");
            return {};
        case DelayCase::A: return inf ? std::vector<int>{1} : std::vector<int>{};
        case DelayCase::B: return inf ? std::vector<int>{2} : std::vector<int>{};
        case DelayCase::C: return inf ? std::vector<int>{1, 2} : std::vector<int>{1};
    }
    throw DomainError("unknown scenario");
}

OutcomeDistribution mixture_distribution(const TransferMatrix& u, const SourceModel& s,
                                         const std::vector<int>& delayed) {
    require_three_modes(u);
    s.validate();
    const std::vector<int> modes{0, 1, 2};
    const RealMatrix same = RealMatrix::Ones(3, 3);
    RealMatrix odd = same;
    odd(0, 1) = odd(1, 0) = odd(1, 2) = odd(2, 1) = 0.0;

    const auto indist = labeled_photon_distribution(u, modes, OverlapMatrix(apply_delays(same, modes, delayed)));
    const auto dist = labeled_photon_distribution(u, modes, OverlapMatrix(apply_delays(odd, modes, delayed)));

    const double r = s.r();
    std::vector<OutcomeDistribution::Entry> entries;
    auto it = dist.begin();
    for (const auto& e : indist) {
        entries.push_back({e.outcome, r * e.probability + (1.0 - r) * it->probability});
        ++it;
    }
    return OutcomeDistribution(3, std::move(entries), r * indist.norm_deficit() + (1.0 - r) * dist.norm_deficit());
}

double mixture_probability(const TransferMatrix& u, const SourceModel& s, const MeasurementScenario& scenario,
                           Arm arm) {
    scenario.validate();
    return mixture_distribution(u, s, delayed_ports(scenario.delay_case, arm)).probability(scenario.outcome);
}

double click_probability(const FockOutcome& arrived, const FockOutcome& target, double eta) {
    if (arrived.dim() != target.dim()) throw DimensionError("arrived and target outcomes have different lengths");
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
    double p = 1.0;
    for (int j = 0; j < target.dim(); ++j) {
        const int need = target[j];
        if (need == 0) continue;
        if (need > 3) throw DomainError("at most three detectors per output");
        const int detectors = need == 1 ? 1 : 3;
        p *= cascade_clicks(arrived[j], detectors, need, eta);
        if (p == 0.0) break;
    }
    return p;
}

double detection_factor(const FockOutcome& target, double eta) {
    require_supported(target);
    return click_probability(target, target, eta) * eta;
}

double detect_fourfold(const OutcomeDistribution& dist, const FockOutcome& target, double eta, int trigger_photons) {
    require_supported(target);
    if (trigger_photons < 0) throw DomainError("negative trigger photon number");
    const double trigger = trigger_click(trigger_photons, eta);
    if (trigger == 0.0) return 0.0;
    double total = 0.0;
    for (const auto& e : dist) {
        if (e.outcome.dim() != target.dim()) throw DimensionError("distribution and target have different mode counts");
        if (e.probability == 0.0) continue;
        total += e.probability * click_probability(e.outcome, target, eta);
    }
    return total * trigger;
}

double six_photon_correction(const TransferMatrix& u, const SourceModel& s, const MeasurementScenario& scenario,
                             Arm arm) {
    require_three_modes(u);
    s.validate();
    scenario.validate();
    require_supported(scenario.outcome);
    if (s.g == 0.0) return 0.0;
    const auto branches = six_photon_branches(u, s.p, delayed_ports(scenario.delay_case, arm));
    return six_photon_rate(branches, scenario.outcome, s.g, s.eta);
}

double detected_rate(const TransferMatrix& u, const SourceModel& s, const MeasurementScenario& scenario, Arm arm) {
    const double leading = mixture_probability(u, s, scenario, arm) * detection_factor(scenario.outcome, s.eta);
    return leading + six_photon_correction(u, s, scenario, arm);
}

Prediction predicted_visibility(const TransferMatrix& u, const SourceModel& s, const MeasurementScenario& scenario) {
    if (scenario.delay_case == DelayCase::none) throw DomainError("a visibility needs a delay scenario (A, B or C)");
    Prediction out;
    if (!s.perturbative()) out.warnings.push_back("g above 0.5: the six-photon expansion is not reliable");

    out.gamma_inf = detected_rate(u, s, scenario, Arm::out_of_interference);
    const double six_0 = six_photon_correction(u, s, scenario, Arm::zero_delay);
    out.gamma_0 = mixture_probability(u, s, scenario, Arm::zero_delay) * detection_factor(scenario.outcome, s.eta) + six_0;
    if (!(out.gamma_inf > 0.0)) throw DomainError("out-of-interference rate vanishes; visibility undefined");
    out.visibility = (out.gamma_inf - out.gamma_0) / out.gamma_inf;
    out.six_photon_share = out.gamma_0 > 0.0 ? six_0 / out.gamma_0 : 0.0;
    return out;
}

std::vector<LadderStep> prediction_ladder(const TransferMatrix& ideal, const TransferMatrix& measured,
                                          const SourceModel& s) {
    require_three_modes(ideal);
    require_three_modes(measured);
    s.validate();
    SourceModel pure = s;
    pure.p = 1.0;

    std::vector<LadderStep> steps;
    steps.push_back({"ideal, p=1", mixture_distribution(ideal, pure, {})});
    steps.push_back({"measured, p=1", mixture_distribution(measured, pure, {})});
    steps.push_back({"ideal, p", mixture_distribution(ideal, s, {})});
    const auto base = mixture_distribution(measured, s, {});
    steps.push_back({"measured, p", base});

    const auto branches = six_photon_branches(measured, s.p, {});
    std::vector<OutcomeDistribution::Entry> entries;
    double total = 0.0;
    for (const auto& e : base) {
        // every three-photon outcome falls in one of the supported classes
        const double factor = detection_factor(e.outcome, s.eta);
        const double rate = e.probability * factor + six_photon_rate(branches, e.outcome, s.g, s.eta);
        entries.push_back({e.outcome, rate / factor});
        total += rate / factor;
    }
    for (auto& e : entries) e.probability /= total;
    steps.push_back({"measured, p, six-photon", OutcomeDistribution(3, std::move(entries), 0.0)});
    return steps;
}

}  // namespace tritterlab
