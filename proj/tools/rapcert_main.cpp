// Command-line front end: validation, counterexample construction, density
// evaluation, normalisation checks, positivity sweeps, boundary/generating-
// function analysis, obstruction checks, certificates, simulation, and the
// one-shot reproduction report.
//
// Exit codes: 0 pass, 1 check failure, 2 usage, 3 I/O, 4 numeric.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rapcert/io.hpp"
#include "rapcert/report.hpp"

namespace {

using namespace rapcert;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr int exit_pass = 0;
constexpr int exit_check_failure = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;
constexpr int exit_numeric = 4;

Rational parse_phi(const std::string& text) {
    if (text.find('.') != std::string::npos)
        throw DomainError("--phi must be an exact rational P/Q (or integer P), not a float: '" +
                          text + "'");
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(text), 1);
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw DomainError("--phi: cannot parse '" + text + "' as P/Q");
    }
}

std::vector<double> parse_times(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::logic_error&) {
            throw DomainError("--times: cannot parse '" + item + "' as a number");
        }
        if (used != item.size())
            throw DomainError("--times: trailing characters in '" + item + "'");
        out.push_back(v);
    }
    return out;
}

ojson load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("JSON parse error in '" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

void emit(const ojson& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

// Options shared by the model-or-params subcommands.
struct ModelArgs {
    std::string phi = "1";
    double eps = -1.0;  // <0: use the phi-dependent default
    std::string model_path;
    CLI::Option* phi_opt = nullptr;
    CLI::Option* eps_opt = nullptr;
    CLI::Option* model_opt = nullptr;

    void attach(CLI::App* cmd, bool allow_model) {
        phi_opt = cmd->add_option("--phi", phi, "angle phi as an exact rational P/Q in radians");
        eps_opt = cmd->add_option("--eps", eps, "epsilon (default: half the positivity bound)");
        if (allow_model) {
            model_opt = cmd->add_option("--model", model_path,
                                        "JSON RapTriple file instead of counterexample params");
            model_opt->excludes(phi_opt);
            model_opt->excludes(eps_opt);
        }
    }

    bool has_model() const { return model_opt != nullptr && model_opt->count() > 0; }

    CounterexampleParams params() const {
        std::optional<double> e;
        if (eps_opt->count() > 0) e = eps;
        return CounterexampleParams::from_rational(parse_phi(phi), e);
    }

    RapTriple triple() const {
        if (has_model()) {
            try {
                return triple_from_json(load_json_file(model_path));
            } catch (const StructuralError& e) {
                throw IoError("model file '" + model_path + "': " + e.what());
            }
        }
        return build_counterexample(params());
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(rapcert::version_string) +
                 " - order-3 rational arrival process counterexample toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rapcert::version_string);

    std::string out_path;
    std::uint64_t seed = 20240901;
    int k = 1, big_k = 500, samples = 1000, trials = 1000, n_max = 8, paths = 1;
    long long q_bound = 1000000;
    std::string times_str;
    std::string pair_path;
    double tol_exact = tol::exact, tol_quad = tol::quad, tol_cancel = tol::cancel;
    double tol_angle_v = tol::angle, tol_growth_v = tol::growth, tol_peripheral_v = tol::peripheral;
    double one_step_tol = 1e-8;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "write the main output to this path");
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--tol-exact", tol_exact, "tolerance for exact identities (default 1e-12)");
        cmd->add_option("--tol-quad", tol_quad, "quadrature absolute tolerance (default 1e-10)");
        cmd->add_option("--tol-cancel", tol_cancel, "pole-survival tolerance (default 1e-12)");
        cmd->add_option("--tol-angle", tol_angle_v, "root-of-unity phase tolerance (default 1e-9)");
        cmd->add_option("--tol-growth", tol_growth_v, "boundedness slope tolerance (default 1e-3)");
        cmd->add_option("--tol-peripheral", tol_peripheral_v,
                        "peripheral modulus window (default 1e-8)");
    };

    ModelArgs validate_args, density_args, norm_args, sweep_args, boundary_args, gf_args,
        certify_args, simulate_args, report_args;

    auto* cmd_validate = app.add_subcommand("validate", "validate a RAP triple and report residuals");
    validate_args.attach(cmd_validate, true);
    add_common(cmd_validate);

    auto* cmd_density = app.add_subcommand("density", "evaluate a joint interarrival density");
    density_args.attach(cmd_density, true);
    cmd_density->add_option("--times", times_str, "comma-separated interarrival times t1,..,tk")
        ->required();
    std::string density_csv;
    cmd_density->add_option("--csv", density_csv,
                            "append the evaluation as a CSV row (k,t1..tk,value,lower_bound)");
    add_common(cmd_density);

    auto* cmd_norm = app.add_subcommand("normcheck", "one-step and full-mass normalisation checks");
    norm_args.attach(cmd_norm, true);
    cmd_norm->add_option("--times", times_str, "prefix t1..t_{k-1} (empty: k=1 full mass)");
    int full_k = 0;
    cmd_norm->add_option("--full-k", full_k, "also run the nested full-mass check up to this k");
    cmd_norm->add_option("--tol-onestep", one_step_tol, "pass threshold for residuals");
    add_common(cmd_norm);

    auto* cmd_sweep = app.add_subcommand("sweep", "strict-positivity sweep on random grids");
    sweep_args.attach(cmd_sweep, false);
    int sweep_kmax = 10;
    cmd_sweep->add_option("--k-max", sweep_kmax, "grids are drawn for every k <= k-max");
    cmd_sweep->add_option("--samples", samples, "random grids per k");
    add_common(cmd_sweep);

    auto* cmd_boundary = app.add_subcommand("boundary", "boundary sequence a_k, direct vs closed form");
    boundary_args.attach(cmd_boundary, false);
    cmd_boundary->add_option("--K", big_k, "sequence length");
    add_common(cmd_boundary);

    auto* cmd_gf = app.add_subcommand("gf", "generating function A(z), poles, series coefficients");
    gf_args.attach(cmd_gf, false);
    cmd_gf->add_option("--K", big_k, "coefficients to cross-check");
    add_common(cmd_gf);

    auto* cmd_obstruct = app.add_subcommand("obstruct", "spectral obstruction check of a nonnegative pair");
    cmd_obstruct->add_option("--pair", pair_path, "JSON file {\"alpha\": [...], \"c\": [[...]]}")
        ->required();
    cmd_obstruct->add_option("--K", big_k, "boundary terms to examine");
    cmd_obstruct->add_option("--Q", q_bound, "max denominator for angle classification");
    add_common(cmd_obstruct);

    auto* cmd_certify = app.add_subcommand("certify", "assemble the no-MAP certificate");
    certify_args.attach(cmd_certify, false);
    cmd_certify->add_option("--K", big_k, "boundary terms inspected for the boundedness step");
    cmd_certify->add_option("--Q", q_bound, "max denominator for angle classification");
    add_common(cmd_certify);

    auto* cmd_study = app.add_subcommand("study", "random nonnegative realisation study");
    cmd_study->add_option("--trials", trials, "number of random (alpha, C) instances");
    cmd_study->add_option("--n-max", n_max, "max matrix dimension");
    cmd_study->add_option("--Q", q_bound, "max denominator for angle classification");
    add_common(cmd_study);

    auto* cmd_simulate = app.add_subcommand("simulate", "sample interarrival paths");
    simulate_args.attach(cmd_simulate, true);
    cmd_simulate->add_option("--k", k, "arrivals per path");
    cmd_simulate->add_option("--paths", paths, "number of independent paths");
    add_common(cmd_simulate);

    auto* cmd_report = app.add_subcommand("report", "one-shot reproduction report (all checks)");
    report_args.attach(cmd_report, false);
    cmd_report->add_option("--Q", q_bound, "max denominator for angle classification");
    cmd_report->add_option("--samples", samples, "positivity-sweep grids per k");
    add_common(cmd_report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (cmd_validate->parsed()) {
            const RapTriple t = validate_args.triple();
            const ValidationReport rep = validate_rap(t, tol_exact);
            ojson doc;
            doc["validation"] = to_json(rep);
            if (rep.passed) doc["map_constraints"] = to_json(check_map_constraints(t));
            emit(doc, out_path);
            return rep.passed ? exit_pass : exit_check_failure;
        }

        if (cmd_density->parsed()) {
            const TimeGrid grid = TimeGrid::of(parse_times(times_str));
            ojson doc;
            doc["k"] = grid.k();
            doc["times"] = grid.times;
            DensityEvaluation main_ev;
            if (density_args.has_model()) {
                const RapTriple t = density_args.triple();
                if (!validate_rap(t, tol_exact).passed)
                    throw DomainError("density: model fails RAP validation");
                main_ev = joint_density_direct(t, grid);
                doc["value"] = main_ev.value;
                doc["method"] = "direct_product";
            } else {
                const CounterexampleParams p = density_args.params();
                main_ev = joint_density_closed_form(p, grid);
                const DensityEvaluation direct =
                    joint_density_direct(build_counterexample(p), grid);
                doc["value"] = main_ev.value;
                doc["direct_value"] = direct.value;
                doc["abs_diff"] = std::abs(main_ev.value - direct.value);
                doc["lower_bound"] = *main_ev.lower_bound;
                doc["method"] = "closed_form";
            }
            if (!density_csv.empty()) {
                std::ofstream csv(density_csv, std::ios::app);
                if (!csv) throw IoError("cannot open '" + density_csv + "' for writing");
                write_density_csv_row(csv, grid, main_ev);
            }
            emit(doc, out_path);
            return exit_pass;
        }

        if (cmd_norm->parsed()) {
            const RapTriple t = norm_args.triple();
            const std::vector<double> prefix = parse_times(times_str);
            ojson doc;
            const double resid = marginal_consistency_check(t, prefix, tol_quad);
            doc["prefix"] = prefix;
            doc["one_step_residual"] = resid;
            bool ok = resid <= one_step_tol;
            if (full_k > 0) {
                if (norm_args.has_model())
                    throw DomainError("normcheck --full-k requires counterexample params");
                ojson masses = ojson::array();
                for (int kk = 1; kk <= full_k; ++kk) {
                    const double r = full_mass_residual(norm_args.params(), kk);
                    masses.push_back(ojson{{"k", kk}, {"residual", r}});
                    ok = ok && r <= 1e-7;
                }
                doc["full_mass"] = std::move(masses);
            }
            doc["passed"] = ok;
            emit(doc, out_path);
            return ok ? exit_pass : exit_check_failure;
        }

        if (cmd_sweep->parsed()) {
            const PositivitySweepReport rep =
                positivity_sweep(sweep_args.params(), sweep_kmax, samples, seed);
            emit(to_json(rep), out_path);
            return exit_pass;
        }

        if (cmd_boundary->parsed()) {
            const CounterexampleParams p = boundary_args.params();
            const BoundarySequence direct = boundary_sequence_direct(build_counterexample(p), big_k);
            const BoundarySequence closed = boundary_sequence_closed(p, big_k);
            double worst = 0;
            for (std::size_t i = 0; i < closed.values.size(); ++i)
                worst = std::max(worst, std::abs(direct.values[i] - closed.values[i]));
            ojson doc;
            doc["K"] = big_k;
            doc["bound"] = *closed.bound;
            doc["max_abs_diff"] = worst;
            doc["a_first"] = closed.values.front();
            if (!out_path.empty()) {
                std::ostringstream csv;
                write_boundary_csv(csv, direct, closed);
                write_text_file(out_path, csv.str());
                doc["csv"] = out_path;
                std::cout << doc.dump(2) << "\n";
            } else {
                emit(doc, "");
            }
            return exit_pass;
        }

        if (cmd_gf->parsed()) {
            const CounterexampleParams p = gf_args.params();
            const GeneratingFunction gf = generating_function(p, tol_cancel);
            const std::vector<double> coeffs = series_coefficients(gf, big_k);
            const BoundarySequence closed = boundary_sequence_closed(p, big_k);
            double worst = 0;
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                worst = std::max(worst, std::abs(coeffs[i] - closed.values[i]));
            ojson doc = to_json(gf);
            doc["coefficients_checked"] = big_k;
            doc["max_coefficient_diff"] = worst;
            emit(doc, out_path);
            return exit_pass;
        }

        if (cmd_obstruct->parsed()) {
            const ojson j = load_json_file(pair_path);
            if (!j.contains("alpha") || !j.contains("c"))
                throw IoError("pair JSON '" + pair_path + "': need fields 'alpha' and 'c'");
            Vec alpha;
            Matrix c;
            try {
                alpha = j["alpha"].get<std::vector<double>>();
                c = matrix_from_json(j["c"], "c");
            } catch (const StructuralError& e) {
                throw IoError("pair JSON '" + pair_path + "': " + e.what());
            }
            ObstructionOptions opt;
            opt.peripheral_tol = tol_peripheral_v;
            opt.tol_angle = tol_angle_v;
            opt.growth_tol = tol_growth_v;
            const ObstructionReport rep = check_obstruction(alpha, c, big_k, q_bound, opt);
            emit(to_json(rep), out_path);
            return rep.verdict == ObstructionReport::Verdict::obstructed ? exit_check_failure
                                                                         : exit_pass;
        }

        if (cmd_certify->parsed()) {
            CertifyOptions copt;
            copt.boundary_k = big_k;
            copt.q_bound = q_bound;
            copt.tol_cancel = tol_cancel;
            const NoMapCertificate cert = certify_no_map(certify_args.params(), copt);
            emit(to_json(cert), out_path);
            return cert.conclusion ? exit_pass : exit_check_failure;
        }

        if (cmd_study->parsed()) {
            const RealisationStudySummary sum =
                random_nonnegative_realisation_study(trials, n_max, seed, q_bound);
            emit(to_json(sum), out_path);
            return sum.irrational_verdicts == 0 ? exit_pass : exit_check_failure;
        }

        if (cmd_simulate->parsed()) {
            if (paths < 1) throw DomainError("simulate: --paths must be >= 1");
            std::vector<SamplePath> all;
            all.reserve(static_cast<std::size_t>(paths));
            const SplitMix64 root(seed);
            double mean = 0;
            long count = 0;
            long proposals = 0, accepted = 0;
            for (int i = 0; i < paths; ++i) {
                SplitMix64 child = root.split(static_cast<std::uint64_t>(i));
                const std::uint64_t path_seed = child.next();
                SamplePath path =
                    simulate_args.has_model()
                        ? simulate_map(simulate_args.triple(), k, path_seed)
                        : simulate_rap_sequential(simulate_args.params(), k, path_seed);
                for (double t : path.interarrivals) {
                    mean += t;
                    ++count;
                }
                proposals += path.proposals;
                accepted += path.accepted;
                all.push_back(std::move(path));
            }
            ojson doc;
            doc["paths"] = paths;
            doc["k"] = k;
            doc["seed"] = seed;
            doc["mean_interarrival"] = mean / static_cast<double>(count);
            if (!simulate_args.has_model() && proposals > 0)
                doc["mean_acceptance"] =
                    static_cast<double>(accepted) / static_cast<double>(proposals);
            if (!out_path.empty()) {
                std::ostringstream csv;
                write_paths_csv(csv, all);
                write_text_file(out_path, csv.str());
                doc["csv"] = out_path;
            }
            std::cout << doc.dump(2) << "\n";
            return exit_pass;
        }

        if (cmd_report->parsed()) {
            ReportOptions opt;
            opt.seed = seed;
            opt.sweep_samples_per_k = samples;
            opt.q_bound = q_bound;
            opt.tol_exact = tol_exact;
            opt.quad_tol = tol_quad;
            opt.tol_cancel = tol_cancel;
            CounterexampleParams params = [&] {
                std::optional<double> e;
                if (report_args.eps_opt->count() > 0) e = report_args.eps;
                // epsilon = 0 must reach the certificate stage to be refused
                // with its own reason, so bypass the (0,1) build guard here.
                return CounterexampleParams::from_rational(parse_phi(report_args.phi), e);
            }();
            const ReportBundle bundle = run_report(params, opt);
            if (!out_path.empty()) {
                std::filesystem::create_directories(out_path);
                write_text_file(out_path + "/report.json", bundle.doc.dump(2) + "\n");
                write_text_file(out_path + "/report.md", bundle.markdown);
            }
            for (const auto& st : bundle.doc["stages"])
                std::cout << (st["passed"].get<bool>() ? "pass " : "FAIL ")
                          << st["stage"].get<std::string>() << "\n";
            std::cout << (bundle.passed ? "report: all checks passed"
                                        : "report: first failure at stage '" +
                                              bundle.first_failure + "'")
                      << "\n";
            return bundle.passed ? exit_pass : exit_check_failure;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const InternalInconsistencyError& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return exit_check_failure;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
    return exit_usage;
}
