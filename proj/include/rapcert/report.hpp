#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "rapcert/io.hpp"

namespace rapcert {

inline constexpr const char* version_string = "rapcert 1.0.0";

struct ReportOptions {
    std::uint64_t seed = 20240901;

    int normcheck_points = 10;   // sampled t1 values for the one-step identity
    int full_mass_k_max = 2;     // nested full-mass integrals up to this k
    int sweep_k_max = 8;
    int sweep_samples_per_k = 1000;
    int wm_max = 10000;
    int crosscheck_k_max = 6;
    int crosscheck_grids_per_k = 100;
    double crosscheck_rel_tol = 1e-10;
    int boundary_k = 500;
    double boundary_agreement_tol = 1e-11;
    int gf_k = 200;
    double gf_coeff_tol = 1e-10;

    double tol_exact = tol::exact;
    double quad_tol = tol::quad;
    double one_step_tol = 1e-8;
    double full_mass_tol = 1e-7;
    double tol_cancel = tol::cancel;
    long long q_bound = 1000000;
};

struct ReportBundle {
    ojson doc;
    std::string markdown;
    bool passed = false;
    std::string first_failure;
};

namespace detail {

struct StageRecorder {
    ojson stages = ojson::array();
    bool all_passed = true;
    std::string first_failure;

    void add(const std::string& name, bool passed, ojson details,
             const std::string& reason = "") {
        ojson st;
        st["stage"] = name;
        st["passed"] = passed;
        if (!reason.empty()) st["reason"] = reason;
        st["details"] = std::move(details);
        stages.push_back(std::move(st));
        if (!passed && all_passed) {
            all_passed = false;
            first_failure = name;
        }
    }
};

}  // namespace detail

// The one-shot reproduction pipeline: construction and validation, exact
// normalisation, strict positivity, the closed-form identity, the boundary
// sequence and its generating function, and the impossibility certificate.
inline ReportBundle run_report(const CounterexampleParams& params, const ReportOptions& opt = {}) {
    detail::StageRecorder rec;
    const bool constructible = params.epsilon > 0.0 && params.epsilon < 1.0;
    RapTriple triple;

    // construction
    {
        ojson d = to_json(params);
        if (constructible) {
            triple = build_counterexample(params);
            d["triple"] = to_json(triple);
            const Vec conserv = row_sums(triple.g0 + triple.g1);
            double resid = 0;
            for (double v : conserv) resid = std::max(resid, std::abs(v));
            d["conservation_residual"] = resid;
            rec.add("construction", resid <= 1e-15, std::move(d));
        } else {
            rec.add("construction", false, std::move(d),
                    "epsilon outside (0,1): counterexample triple not constructible");
        }
    }

    // validation + dominant-eigenvalue condition
    if (constructible) {
        const ValidationReport v = validate_rap(triple, opt.tol_exact);
        const MapConstraintReport mc = check_map_constraints(triple);
        const DominantRealCheck dom = dominant_real_check(triple.g0);
        ojson d;
        d["validation"] = to_json(v);
        d["map_constraints"] = to_json(mc);
        d["dominant_real"] = ojson{{"dominant", dom.dominant},
                                   {"top_real_part", dom.top_real_part},
                                   {"second_real_part", dom.second_real_part},
                                   {"gap", dom.gap}};
        const bool ok = v.passed && !mc.is_map && dom.dominant;
        rec.add("validate", ok, std::move(d),
                ok ? "" : "RAP validation, MAP-constraint or dominant-eigenvalue check failed");
    }

    // exact normalisation
    if (constructible) {
        ojson d;
        double worst_one_step = 0;
        ojson residuals = ojson::array();
        for (int i = 0; i < opt.normcheck_points; ++i) {
            const double t1 = 0.35 * i;
            const double r = marginal_consistency_check(triple, {t1}, opt.quad_tol);
            residuals.push_back(ojson{{"t1", t1}, {"residual", r}});
            worst_one_step = std::max(worst_one_step, r);
        }
        d["one_step"] = std::move(residuals);
        d["one_step_worst"] = worst_one_step;
        double worst_mass = 0;
        ojson masses = ojson::array();
        for (int k = 1; k <= opt.full_mass_k_max; ++k) {
            const double r = full_mass_residual(params, k);
            masses.push_back(ojson{{"k", k}, {"residual", r}});
            worst_mass = std::max(worst_mass, r);
        }
        d["full_mass"] = std::move(masses);
        d["full_mass_worst"] = worst_mass;
        const bool ok = worst_one_step <= opt.one_step_tol && worst_mass <= opt.full_mass_tol;
        rec.add("normalisation", ok, std::move(d));
    }

    // strict positivity
    {
        ojson d;
        bool ok = false;
        std::string reason;
        try {
            const RotationPartialSums wm = rotation_partial_sums(params, opt.wm_max);
            d["rotation_sum_max_abs"] = wm.max_abs;
            d["rotation_sum_bound"] = wm.bound;
            const PositivitySweepReport sweep =
                positivity_sweep(params, opt.sweep_k_max, opt.sweep_samples_per_k, opt.seed);
            d["sweep"] = to_json(sweep);
            ok = true;
        } catch (const DomainError& e) {
            reason = e.what();
        } catch (const InternalInconsistencyError& e) {
            reason = e.what();
        }
        rec.add("positivity", ok, std::move(d), reason);
    }

    // closed form vs direct product
    if (constructible) {
        SplitMix64 rng(opt.seed ^ 0x63726f7373ULL);
        double worst_rel = 0;
        long grids = 0;
        for (int k = 1; k <= opt.crosscheck_k_max; ++k) {
            for (int s = 0; s < opt.crosscheck_grids_per_k; ++s) {
                const TimeGrid grid = random_sweep_grid(k, rng);
                const double direct = joint_density_direct(triple, grid).value;
                const double closed = joint_density_closed_form(params, grid).value;
                worst_rel = std::max(worst_rel, std::abs(direct - closed) / std::abs(closed));
                ++grids;
            }
        }
        ojson d{{"grids", grids}, {"k_max", opt.crosscheck_k_max}, {"worst_relative_diff", worst_rel}};
        rec.add("closed_form_identity", worst_rel <= opt.crosscheck_rel_tol, std::move(d));
    }

    // boundary sequence
    {
        ojson d;
        bool ok = false;
        if (constructible) {
            const BoundarySequence direct = boundary_sequence_direct(triple, opt.boundary_k);
            const BoundarySequence closed = boundary_sequence_closed(params, opt.boundary_k);
            double worst = 0, dev = 0;
            for (std::size_t i = 0; i < closed.values.size(); ++i) {
                worst = std::max(worst, std::abs(direct.values[i] - closed.values[i]));
                dev = std::max(dev, std::abs(closed.values[i] - 1.0));
            }
            const double dev_bound = params.epsilon * std::numbers::sqrt2 / std::sin(0.5 * params.phi);
            d["k"] = opt.boundary_k;
            d["max_abs_diff"] = worst;
            d["max_deviation_from_one"] = dev;
            d["deviation_bound"] = dev_bound;
            ok = worst <= opt.boundary_agreement_tol && dev <= dev_bound;
        } else {
            const BoundarySequence closed = boundary_sequence_closed(params, opt.boundary_k);
            double dev = 0;
            for (double ak : closed.values) dev = std::max(dev, std::abs(ak - 1.0));
            d["max_deviation_from_one"] = dev;
            ok = true;
        }
        rec.add("boundary_sequence", ok, std::move(d));
    }

    // generating function
    {
        const GeneratingFunction gf = generating_function(params, opt.tol_cancel);
        const std::vector<double> coeffs = series_coefficients(gf, opt.gf_k);
        const BoundarySequence closed = boundary_sequence_closed(params, opt.gf_k);
        double worst = 0;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            worst = std::max(worst, std::abs(coeffs[i] - closed.values[i]));
        ojson d;
        d["generating_function"] = to_json(gf);
        d["coefficients_checked"] = opt.gf_k;
        d["max_coefficient_diff"] = worst;
        const bool survive = params.epsilon == 0.0 ||
                             (gf.numerator_magnitude_plus > opt.tol_cancel &&
                              gf.numerator_magnitude_minus > opt.tol_cancel);
        rec.add("generating_function", worst <= opt.gf_coeff_tol && survive, std::move(d));
    }

    // impossibility certificate
    {
        CertifyOptions copt;
        copt.boundary_k = opt.boundary_k;
        copt.q_bound = opt.q_bound;
        copt.tol_cancel = opt.tol_cancel;
        const NoMapCertificate cert = certify_no_map(params, copt);
        rec.add("certificate", cert.conclusion, to_json(cert),
                cert.conclusion ? "" : cert.refusal_reason);
    }

    ReportBundle bundle;
    bundle.passed = rec.all_passed;
    bundle.first_failure = rec.first_failure;
    bundle.doc["meta"] = ojson{{"tool", version_string},
                               {"seed", opt.seed},
                               {"tolerances",
                                ojson{{"tol_exact", opt.tol_exact},
                                      {"quad_tol", opt.quad_tol},
                                      {"one_step_tol", opt.one_step_tol},
                                      {"full_mass_tol", opt.full_mass_tol},
                                      {"tol_cancel", opt.tol_cancel},
                                      {"crosscheck_rel_tol", opt.crosscheck_rel_tol},
                                      {"boundary_agreement_tol", opt.boundary_agreement_tol},
                                      {"gf_coeff_tol", opt.gf_coeff_tol},
                                      {"q_bound", opt.q_bound}}}};
    bundle.doc["params"] = to_json(params);
    bundle.doc["stages"] = rec.stages;
    bundle.doc["passed"] = rec.all_passed;
    if (!rec.all_passed) bundle.doc["first_failure"] = rec.first_failure;

    // human-readable companion, generated from the same data
    std::ostringstream md;
    md << "# RAP counterexample report\n\n";
    if (params.phi_exact)
        md << "- phi = " << params.phi_exact->str() << " rad (exact rational)\n";
    else
        md << "- phi = " << params.phi << " rad\n";
    md << "- epsilon = " << params.epsilon << " (guaranteed-positivity bound "
       << params.epsilon_max() << ")\n"
       << "- M(phi) = " << params.m_bound << "\n\n"
       << "| stage | result |\n|---|---|\n";
    for (const auto& st : bundle.doc["stages"]) {
        md << "| " << st["stage"].get<std::string>() << " | "
           << (st["passed"].get<bool>() ? "pass" : "FAIL") << " |\n";
    }
    md << "\n";
    const auto& certificate = bundle.doc["stages"].back()["details"];
    if (certificate.contains("conclusion") && certificate["conclusion"].get<bool>()) {
        md << "Conclusion: the process admits **no finite-dimensional MAP representation**.\n\n";
        for (const auto& st : certificate["steps"])
            md << "- (" << st["step"].get<std::string>() << ") "
               << st["statement"].get<std::string>() << "\n";
    } else if (certificate.contains("refusal_reason")) {
        md << "Certificate refused: " << certificate["refusal_reason"].get<std::string>() << "\n";
    }
    bundle.markdown = md.str();
    return bundle;
}

}  // namespace rapcert
