// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <tritterlab/classical_bounds.hpp>
#include <tritterlab/coupled_mode.hpp>
#include <tritterlab/experiment_model.hpp>
#include <tritterlab/interference.hpp>
#include <tritterlab/io.hpp>
#include <tritterlab/reconstruction.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace tritterlab::cli {

namespace {

using nlohmann::json;

// Suppressed outcomes come out of the permanent as ~1e-32 rounding noise; print them as 0.
std::string format_probability(double p) { return std::abs(p) < 1e-14 ? std::string{"0"} : format_number(p); }

struct Globals {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string format;
    std::string output;
};

json real_rows(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json complex_rows(const TransferMatrix& u) {
    json rows = json::array();
    for (int i = 0; i < u.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < u.dim(); ++j) row.push_back({u(i, j).real(), u(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

json distribution_json(const OutcomeDistribution& d) {
    json outcomes = json::array();
    for (const auto& e : d) outcomes.push_back({{"occ", e.outcome.occupations()}, {"p", e.probability}});
    return outcomes;
}

TransferMatrix matrix_or_ideal(const std::string& path) {
    return path.empty() ? ideal_tritter() : load_matrix(path);
}

std::vector<int> parse_ports(const std::string& text, int dim) {
    const FockOutcome list = FockOutcome::parse(text);  // reuses the comma-separated integer parser
    std::vector<int> ports;
    for (int p : list.occupations()) {
        if (p < 1 || p > dim) throw DomainError("port " + std::to_string(p) + " outside 1.." + std::to_string(dim));
        ports.push_back(p - 1);
    }
    return ports;
}

void require_format(const Globals& g, std::initializer_list<const char*> allowed) {
    if (g.format.empty()) return;
    for (const char* f : allowed) {
        if (g.format == f) return;
    }
    throw DomainError("format '" + g.format + "' is not available for this command");
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Subcommands. Each returns the text to emit.
// ---------------------------------------------------------------------------

struct IdealArgs {
    bool classical = false;
    std::string input = "1,1,1";
};

std::string cmd_ideal(const Globals& g, const IdealArgs& a) {
    require_format(g, {"text", "json", "csv"});
    const TransferMatrix u = ideal_tritter();
    const FockOutcome input = FockOutcome::parse(a.input);
    const auto dist = a.classical ? evolve_classical(u, input) : evolve_quantum(u, input);

    if (g.format == "json") {
        json doc{{"matrix", complex_rows(u)},
                 {"input", input.occupations()},
                 {"model", a.classical ? "classical" : "quantum"},
                 {"outcomes", distribution_json(dist)}};
        return dump(doc);
    }
    if (g.format == "csv") return distribution_to_csv(dist, u.dim());

    std::ostringstream out;
    out << "U =\n";
    for (int i = 0; i < u.dim(); ++i) {
        out << " ";
        for (int j = 0; j < u.dim(); ++j) {
            const Complex z = u(i, j);
            out << ' ' << format_number(z.real()) << (z.imag() < 0 ? "-" : "+") << format_number(std::abs(z.imag()))
                << 'i';
        }
        out << '\n';
    }
    out << (a.classical ? "classical" : "quantum") << " distribution for input " << input.to_string() << ":\n";
    for (const auto& e : dist) out << "P(" << e.outcome.to_string() << ")=" << format_probability(e.probability) << '\n';
    return out.str();
}

struct CouplerArgs {
    double k = 1.0;
    std::optional<double> z;
    double beta = 0.0;
};

std::string cmd_coupler(const Globals& g, const CouplerArgs& a) {
    require_format(g, {"json"});
    const double z = a.z ? *a.z : balanced_length(a.k);
    const TransferMatrix u = tritter_matrix({a.k, a.beta, z});
    json doc{{"k", a.k},
             {"z", z},
             {"beta", a.beta},
             {"matrix", complex_rows(u)},
             {"routing", real_rows(u.routing_probabilities())},
             {"unitary_deviation", u.unitary_deviation()},
             {"balanced_length", balanced_length(a.k)},
             {"two_coupler_reflectivity", two_coupler_reflectivity(a.k, z)}};
    return dump(doc);
}

struct SurfaceArgs {
    std::string outcome;
    std::string input = "1,1,1";
    int grid = 21;
    double range = 3.0;
    double width = 1.0;
    std::string matrix;
};

std::string cmd_surface(const Globals& g, const SurfaceArgs& a) {
    require_format(g, {"csv", "json"});
    if (a.grid < 1) throw DomainError("grid needs at least one point");
    if (!(a.range >= 0.0)) throw DomainError("range must be non-negative");
    const TransferMatrix u = matrix_or_ideal(a.matrix);
    const FockOutcome input = FockOutcome::parse(a.input);
    const FockOutcome outcome = FockOutcome::parse(a.outcome);
    if (input.dim() != u.dim() || outcome.dim() != u.dim()) throw DimensionError("occupation length does not match matrix");
    if (input.total() < 2) throw DomainError("a delay surface needs at least two photons");
    const auto modes = input.photon_modes();

    std::vector<double> axis;
    for (int i = 0; i < a.grid; ++i) axis.push_back(a.grid == 1 ? 0.0 : -a.range + 2.0 * a.range * i / (a.grid - 1));

    json rows = json::array();
    std::string csv = "x1,x2,P\n";
    for (double x1 : axis) {
        for (double x2 : axis) {
            DelayConfig delays;
            delays.delays.assign(modes.size(), 0.0);
            delays.delays[0] = x1;
            delays.delays[1] = x2;
            delays.spectral_width = a.width;
            const double p = labeled_photon_probability(u, modes, OverlapMatrix::from_delays(delays), outcome);
            csv += format_number(x1) + ',' + format_number(x2) + ',' + format_probability(p) + '\n';
            rows.push_back({{"x1", x1}, {"x2", x2}, {"p", p}});
        }
    }
    if (g.format == "json") return dump(json{{"outcome", outcome.occupations()}, {"points", rows}});
    return csv;
}

struct ReconstructArgs {
    std::string visibilities;
    std::string singles;
    double q = 1.0;
    int bootstrap = 0;
    int restarts = 20;
};

std::string cmd_reconstruct(const Globals& g, const ReconstructArgs& a) {
    require_format(g, {"json"});
    const VisibilityMatrix measured = load_visibilities(a.visibilities);
    const SinglesCounts singles = load_singles(a.singles);

    FitOptions options;
    options.seed = g.seed;
    options.threads = g.threads;
    options.restarts = a.restarts;
    auto fit = fit_matrix(measured, moduli_from_singles(singles), a.q, options);
    if (a.bootstrap > 0) fit.uncertainties = bootstrap_uncertainties(measured, moduli_from_singles(singles), a.q, a.bootstrap, options);

    const VisibilityMatrix predicted = predict_visibilities(fit.matrix);
    json doc{{"form", "polar"},
             {"moduli", real_rows(fit.moduli)},
             {"phases", real_rows(fit.phases)},
             {"q", a.q},
             {"residual", fit.residual},
             {"initial_residual", fit.initial_residual},
             {"runs", fit.runs},
             {"converged_runs", fit.converged_runs},
             {"sigma_replaced", fit.sigma_replaced},
             {"similarity_vs_ideal", similarity(predicted, predict_visibilities(ideal_tritter()))}};
    try {
        doc["similarity_vs_measured"] = similarity(predicted, measured, a.q);
    } catch (const DomainError&) {
        doc["similarity_vs_measured"] = nullptr;
    }
    if (fit.uncertainties) {
        doc["uncertainties"] = {{"moduli", real_rows(fit.uncertainties->moduli)},
                                {"phases", real_rows(fit.uncertainties->phases)},
                                {"runs", fit.uncertainties->runs},
                                {"failures", fit.uncertainties->failures}};
    }
    return dump(doc);
}

struct ClassicalArgs {
    std::string matrix;
    std::string outcome;
    std::string delayed = "2";
    std::string method = "quad:32";
    double amplitude = 1.0;
    bool sweep = false;
};

std::string cmd_classical(const Globals& g, const ClassicalArgs& a) {
    require_format(g, {"json"});
    const TransferMatrix u = matrix_or_ideal(a.matrix);
    const FockOutcome outcome = FockOutcome::parse(a.outcome);
    const DelayedSpec delayed{parse_ports(a.delayed, u.dim())};
    AveragingMethod method = AveragingMethod::parse(a.method);
    method.seed = g.seed;
    method.threads = g.threads;

    const auto v = classical_visibility(u, CoherentInput::equal(a.amplitude, u.dim()), outcome, delayed, method);
    json doc{{"outcome", outcome.occupations()},
             {"amplitude", a.amplitude},
             {"method", a.method},
             {"gamma_inf", v.gamma_inf.mean},
             {"gamma_0", v.gamma_0.mean},
             {"visibility", v.visibility}};
    if (method.kind == AveragingMethod::Kind::monte_carlo) {
        doc["gamma_inf_se"] = v.gamma_inf.standard_error;
        doc["gamma_0_se"] = v.gamma_0.standard_error;
    }
    if (a.sweep) {
        const auto s = classical_bound_sweep(u, outcome, delayed, method);
        json points = json::array();
        for (std::size_t i = 0; i < s.moduli.size(); ++i) {
            points.push_back({{"amplitude", s.moduli[i]}, {"visibility", s.visibilities[i]}});
        }
        doc["sweep"] = points;
        doc["bound"] = s.supremum;
        doc["bound_amplitude"] = s.supremum_modulus;
    }
    return dump(doc);
}

struct PredictArgs {
    std::string matrix;
    SourceModel source;
    std::string scenario;
    std::string outcome = "1,1,1";
};

std::string cmd_predict(const Globals& g, const PredictArgs& a, std::ostream& err) {
    require_format(g, {"json"});
    const TransferMatrix u = matrix_or_ideal(a.matrix);
    const MeasurementScenario scenario{parse_delay_case(a.scenario), FockOutcome::parse(a.outcome)};
    const Prediction p = predicted_visibility(u, a.source, scenario);
    for (const auto& w : p.warnings) err << "tritterlab: warning: " << w << '\n';
    json doc{{"scenario", to_string(scenario.delay_case)},
             {"outcome", scenario.outcome.occupations()},
             {"gamma_inf", p.gamma_inf},
             {"gamma_0", p.gamma_0},
             {"visibility", p.visibility},
             {"six_photon_share", p.six_photon_share}};
    return dump(doc);
}

struct LadderArgs {
    std::string matrix;
    SourceModel source;
};

std::string cmd_ladder(const Globals& g, const LadderArgs& a) {
    require_format(g, {"json"});
    const auto steps = prediction_ladder(ideal_tritter(), matrix_or_ideal(a.matrix), a.source);
    json out = json::array();
    for (const auto& s : steps) out.push_back({{"label", s.label}, {"outcomes", distribution_json(s.distribution)}});
    return dump(json{{"steps", out}});
}

struct VisibilitiesArgs {
    std::string matrix;
    double scale = 1.0;
    double sigma = 0.0;
};

std::string cmd_visibilities(const Globals& g, const VisibilitiesArgs& a) {
    require_format(g, {"csv"});
    if (!(a.sigma >= 0.0)) throw DomainError("sigma must be non-negative");
    VisibilityMatrix v = predict_visibilities(matrix_or_ideal(a.matrix));
    for (auto& e : v.entries()) {
        if (e.value) e.value = a.scale * *e.value;
        e.sigma = a.sigma;
    }
    return visibilities_to_csv(v);
}

void add_source_options(CLI::App* sub, SourceModel& s) {
    sub->add_option("--p", s.p, "overlap between photons of different pairs")->capture_default_str();
    sub->add_option("--q", s.q, "two-photon purity factor")->capture_default_str();
    sub->add_option("--g", s.g, "parametric gain")->capture_default_str();
    sub->add_option("--eta", s.eta, "detector efficiency")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tritterlab: multiphoton interference in three-port linear optics"};
    app.name("tritterlab");
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "seed for every random stream")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads (0: all cores)")->capture_default_str();
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "csv", "json"}));
    app.add_option("--output,-o", g.output, "write to this file instead of stdout");

    std::function<std::string()> action;

    IdealArgs ideal;
    auto* s_ideal = app.add_subcommand("ideal", "Print the ideal tritter matrix and its output distribution");
    s_ideal->add_flag("--classical", ideal.classical, "distinguishable photons instead of identical ones");
    s_ideal->add_option("--input", ideal.input, "input occupation")->capture_default_str();
    s_ideal->callback([&] { action = [&] { return cmd_ideal(g, ideal); }; });

    CouplerArgs coupler;
    auto* s_coupler = app.add_subcommand("coupler", "Transfer matrix of a symmetric three-waveguide coupler");
    s_coupler->add_option("--k", coupler.k, "coupling constant")->required();
    s_coupler->add_option("--z", coupler.z, "interaction length (default: balanced length)");
    s_coupler->add_option("--beta", coupler.beta, "propagation constant")->capture_default_str();
    s_coupler->callback([&] { action = [&] { return cmd_coupler(g, coupler); }; });

    SurfaceArgs surface;
    auto* s_surface = app.add_subcommand("surface", "Outcome probability over a grid of delays (t1, t2, 0)");
    s_surface->add_option("--outcome", surface.outcome, "output occupation, e.g. 2,1,0")->required();
    s_surface->add_option("--input", surface.input, "input occupation")->capture_default_str();
    s_surface->add_option("--grid", surface.grid, "points per axis")->capture_default_str();
    s_surface->add_option("--range", surface.range, "delays span [-range, range]")->capture_default_str();
    s_surface->add_option("--width", surface.width, "spectral width")->capture_default_str();
    s_surface->add_option("--matrix", surface.matrix, "matrix JSON (default: ideal tritter)");
    s_surface->callback([&] { action = [&] { return cmd_surface(g, surface); }; });

    ReconstructArgs recon;
    auto* s_recon = app.add_subcommand("reconstruct", "Fit a transfer matrix to singles and HOM visibilities");
    s_recon->add_option("--visibilities", recon.visibilities, "CSV i,j,k,l,visibility,sigma")->required();
    s_recon->add_option("--singles", recon.singles, "CSV i,j,count")->required();
    s_recon->add_option("--q", recon.q, "two-photon purity factor")->capture_default_str();
    s_recon->add_option("--bootstrap", recon.bootstrap, "noisy refits for uncertainties (0: none)")->capture_default_str();
    s_recon->add_option("--restarts", recon.restarts, "random restarts")->capture_default_str();
    s_recon->callback([&] { action = [&] { return cmd_reconstruct(g, recon); }; });

    ClassicalArgs classical;
    auto* s_classical = app.add_subcommand("classical", "Visibility reached by phase-randomized coherent states");
    s_classical->add_option("--matrix", classical.matrix, "matrix JSON (default: ideal tritter)");
    s_classical->add_option("--outcome", classical.outcome, "output occupation")->required();
    s_classical->add_option("--delayed", classical.delayed, "delayed port, or held,scanned ports")->capture_default_str();
    s_classical->add_option("--method", classical.method, "quad:N or mc:N")->capture_default_str();
    s_classical->add_option("--amplitude", classical.amplitude, "|alpha| on every port")->capture_default_str();
    s_classical->add_flag("--sweep", classical.sweep, "also scan |alpha| over [0.1, 3] and report the largest |V|");
    s_classical->callback([&] { action = [&] { return cmd_classical(g, classical); }; });

    PredictArgs predict;
    auto* s_predict = app.add_subcommand("predict", "Predicted four-fold visibility for a delay scenario");
    s_predict->add_option("--matrix", predict.matrix, "matrix JSON (default: ideal tritter)");
    add_source_options(s_predict, predict.source);
    s_predict->add_option("--scenario", predict.scenario, "A, B or C")->required();
    s_predict->add_option("--outcome", predict.outcome, "output occupation")->capture_default_str();
    s_predict->callback([&] { action = [&] { return cmd_predict(g, predict, err); }; });

    LadderArgs ladder;
    auto* s_ladder = app.add_subcommand("ladder", "Output distributions from ideal to fully modelled device");
    s_ladder->add_option("--matrix", ladder.matrix, "measured matrix JSON (default: ideal tritter)");
    add_source_options(s_ladder, ladder.source);
    s_ladder->callback([&] { action = [&] { return cmd_ladder(g, ladder); }; });

    VisibilitiesArgs vis;
    auto* s_vis = app.add_subcommand("visibilities", "Two-photon visibility table of a matrix, as CSV");
    s_vis->add_option("--matrix", vis.matrix, "matrix JSON (default: ideal tritter)");
    s_vis->add_option("--scale", vis.scale, "multiply every visibility")->capture_default_str();
    s_vis->add_option("--sigma", vis.sigma, "sigma column value")->capture_default_str();
    s_vis->callback([&] { action = [&] { return cmd_visibilities(g, vis); }; });

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kFailure;
    }

    try {
        const std::string text = action();
        if (g.output.empty()) {
            out << text;
        } else {
            write_text_file(g.output, text);
        }
        return kOk;
    } catch (const FileNotFoundError& e) {
        err << "tritterlab: error: " << e.what() << '\n';
        return kFileNotFound;
    } catch (const tritterlab::ParseError& e) {
        err << "tritterlab: error: " << e.what() << '\n';
        return kParseFailure;
    } catch (const FitError& e) {
        err << "tritterlab: error: " << e.what() << '\n';
        return kFitFailure;
    } catch (const std::exception& e) {
        err << "tritterlab: error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace tritterlab::cli
