#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rapcert/boundary.hpp"
#include "rapcert/density.hpp"
#include "rapcert/model.hpp"
#include "rapcert/obstruction.hpp"
#include "rapcert/sim.hpp"

namespace rapcert {

// ordered_json keeps insertion order, which together with the deterministic
// float formatting makes repeated runs byte-identical.
using ojson = nlohmann::ordered_json;

inline ojson to_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (int i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const ojson& j, const std::string& field) {
    if (!j.is_array() || j.empty())
        throw StructuralError("model JSON: field '" + field + "' must be a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    if (!j[0].is_array()) throw StructuralError("model JSON: field '" + field + "' rows must be arrays");
    const int cols = static_cast<int>(j[0].size());
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_array() ||
            static_cast<int>(j[static_cast<std::size_t>(i)].size()) != cols)
            throw StructuralError("model JSON: field '" + field + "' is ragged at row " +
                                  std::to_string(i));
        for (int jj = 0; jj < cols; ++jj)
            m(i, jj) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(jj)].get<double>();
    }
    return m;
}

inline ojson to_json(const RapTriple& t) {
    ojson j;
    j["n"] = t.n;
    j["nu"] = t.nu;
    j["g0"] = to_json(t.g0);
    j["g1"] = to_json(t.g1);
    return j;
}

inline RapTriple triple_from_json(const ojson& j) {
    for (const char* field : {"n", "nu", "g0", "g1"})
        if (!j.contains(field))
            throw StructuralError(std::string("model JSON: missing field '") + field + "'");
    RapTriple t;
    t.n = j["n"].get<int>();
    t.nu = j["nu"].get<std::vector<double>>();
    t.g0 = matrix_from_json(j["g0"], "g0");
    t.g1 = matrix_from_json(j["g1"], "g1");
    detail::check_triple_shape(t);
    return t;
}

inline ojson to_json(const CounterexampleParams& p) {
    ojson j;
    if (p.phi_exact) {
        j["phi"] = ojson{{"p", p.phi_exact->p}, {"q", p.phi_exact->q}};
    } else {
        j["phi_radians"] = p.phi;
    }
    j["epsilon"] = p.epsilon;
    j["cos_phi"] = p.c;
    j["sin_phi"] = p.s;
    j["u1"] = p.u1;
    j["u2"] = p.u2;
    j["m_bound"] = p.m_bound;
    j["epsilon_max"] = p.epsilon_max();
    j["positivity_guaranteed"] = p.positivity_guaranteed;
    j["phi_certified_irrational"] = p.phi_certified_irrational();
    return j;
}

inline CounterexampleParams params_from_json(const ojson& j) {
    if (!j.contains("epsilon")) throw StructuralError("params JSON: missing field 'epsilon'");
    const double eps = j["epsilon"].get<double>();
    if (j.contains("phi")) {
        if (!j["phi"].contains("p") || !j["phi"].contains("q"))
            throw StructuralError("params JSON: field 'phi' must carry integer 'p' and 'q'");
        return CounterexampleParams::from_rational(
            Rational(j["phi"]["p"].get<long long>(), j["phi"]["q"].get<long long>()), eps);
    }
    if (j.contains("phi_radians"))
        return CounterexampleParams::from_angle(j["phi_radians"].get<double>(), eps);
    throw StructuralError("params JSON: missing field 'phi' (as {p, q}) or 'phi_radians'");
}

inline ojson to_json(const ValidationReport& r) {
    ojson checks = ojson::array();
    for (const auto& c : r.checks)
        checks.push_back(ojson{{"name", c.name}, {"residual", c.residual}, {"passed", c.passed}});
    return ojson{{"checks", std::move(checks)}, {"passed", r.passed}};
}

inline ojson to_json(const MapConstraintReport& r) {
    return ojson{{"nu_nonnegative", r.nu_nonnegative},
                 {"g1_nonnegative", r.g1_nonnegative},
                 {"g0_offdiag_nonnegative", r.g0_offdiag_nonnegative},
                 {"g0_rowsums_nonpositive", r.g0_rowsums_nonpositive},
                 {"is_map", r.is_map}};
}

inline ojson to_json(const PositivitySweepReport& r) {
    return ojson{{"k_max", r.k_max},
                 {"samples_per_k", r.samples_per_k},
                 {"evaluated", r.evaluated},
                 {"min_ratio", r.min_ratio},
                 {"min_value", r.min_value},
                 {"violations", r.violations},
                 {"seed", r.seed}};
}

inline ojson to_json(const GeneratingFunction& gf) {
    ojson poles = ojson::array();
    for (const auto& z : gf.poles) poles.push_back(ojson{{"re", z.real()}, {"im", z.imag()}});
    ojson j;
    j["epsilon"] = gf.params.epsilon;
    if (gf.params.phi_exact)
        j["phi"] = ojson{{"p", gf.params.phi_exact->p}, {"q", gf.params.phi_exact->q}};
    else
        j["phi_radians"] = gf.params.phi;
    j["poles"] = std::move(poles);
    j["numerator_magnitude_plus"] = gf.numerator_magnitude_plus;
    j["numerator_magnitude_minus"] = gf.numerator_magnitude_minus;
    j["pole_one_factor"] = gf.pole_one_factor;
    return j;
}

inline ojson to_json(const AngleClass& a) {
    ojson j;
    j["theta"] = a.theta;
    j["verdict"] = a.is_rational() ? "rational_multiple_of_2pi" : "irrational_up_to_bound";
    if (a.is_rational()) {
        j["order"] = a.order;
        j["numerator"] = a.numerator;
    }
    j["best_rational"] = ojson{{"p", a.best_p}, {"q", a.best_q}, {"error", a.best_error}};
    j["q_bound"] = a.q_bound;
    j["symbolic"] = a.symbolic;
    return j;
}

inline ojson to_json(const ObstructionReport& r) {
    ojson phases = ojson::array();
    for (const auto& ph : r.peripheral_phases) phases.push_back(to_json(ph));
    ojson j;
    j["restricted_dimension"] = r.restricted_dimension;
    j["spectral_radius"] = r.spectral_radius;
    j["boundedness_evidence"] = ojson{{"k_checked", r.boundedness_evidence.k_checked},
                                      {"max_abs", r.boundedness_evidence.max_abs},
                                      {"growth_slope", r.boundedness_evidence.growth_slope},
                                      {"bounded", r.boundedness_evidence.bounded}};
    j["nilpotent"] = r.nilpotent;
    j["peripheral_phases"] = std::move(phases);
    j["verdict"] = r.verdict == ObstructionReport::Verdict::obstructed
                       ? "obstructed"
                       : "consistent_with_nonnegative_realisation";
    if (!r.obstruction_reason.empty()) j["obstruction_reason"] = r.obstruction_reason;
    return j;
}

inline ojson to_json(const NoMapCertificate& cert) {
    ojson j;
    j["inputs"] = to_json(cert.params);
    j["conclusion"] = cert.conclusion;
    if (!cert.refusal_reason.empty()) j["refusal_reason"] = cert.refusal_reason;
    ojson steps = ojson::array();
    for (const auto& st : cert.steps)
        steps.push_back(ojson{{"step", st.label}, {"statement", st.statement}, {"holds", st.holds}});
    j["steps"] = std::move(steps);
    j["numeric_evidence"] = ojson{{"pole_numerator_magnitude_plus", cert.pole_evidence_plus},
                                  {"pole_numerator_magnitude_minus", cert.pole_evidence_minus},
                                  {"tol_cancel", cert.tol_cancel_used},
                                  {"boundary_bound", cert.boundary_bound},
                                  {"boundary_max_deviation", cert.boundary_max_deviation},
                                  {"boundary_k_checked", cert.boundary_k_checked}};
    j["symbolic_basis"] = ojson{{"irrationality", cert.irrationality_basis},
                                {"perron_frobenius", cert.perron_frobenius_basis}};
    j["conditioning"] = ojson{{"poles_ill_conditioned", cert.poles_ill_conditioned},
                              {"min_pole_separation", cert.min_pole_separation}};
    return j;
}

inline ojson to_json(const RealisationStudySummary& s) {
    return ojson{{"trials", s.trials},
                 {"irrational_verdicts", s.irrational_verdicts},
                 {"order_exceeded_dimension", s.order_exceeded_dimension},
                 {"max_order_seen", s.max_order_seen},
                 {"nilpotent_cases", s.nilpotent_cases},
                 {"tolerance_boundary_cases", s.tolerance_boundary_cases},
                 {"seed", s.seed}};
}

inline ojson to_json(const AcceptanceRateReport& r) {
    return ojson{{"mean_acceptance", r.mean_acceptance}, {"proposals", r.proposals},
                 {"accepted", r.accepted},               {"trials", r.trials},
                 {"k", r.k},                             {"seed", r.seed}};
}

inline ojson to_json(const HistogramComparison& h) {
    return ojson{{"edges", h.edges},
                 {"observed_mass", h.observed_mass},
                 {"expected_mass", h.expected_mass},
                 {"sup_diff", h.sup_diff},
                 {"chi_square", h.chi_square},
                 {"n_samples", h.n_samples}};
}

// ---- CSV exports ----

namespace detail {
struct CsvPrecision {
    std::ostream& os;
    std::streamsize old;
    explicit CsvPrecision(std::ostream& s)
        : os(s), old(s.precision(std::numeric_limits<double>::max_digits10)) {}
    ~CsvPrecision() { os.precision(old); }
};
}  // namespace detail

inline void write_density_csv_row(std::ostream& os, const TimeGrid& grid,
                                  const DensityEvaluation& ev) {
    detail::CsvPrecision guard(os);
    os << grid.k();
    for (double t : grid.times) os << ',' << t;
    os << ',' << ev.value << ',';
    if (ev.lower_bound) os << *ev.lower_bound;
    os << '\n';
}

inline void write_boundary_csv(std::ostream& os, const BoundarySequence& direct,
                               const BoundarySequence& closed) {
    detail::CsvPrecision guard(os);
    os << "k,a_k,closed_form,diff\n";
    const std::size_t n = std::min(direct.values.size(), closed.values.size());
    for (std::size_t i = 0; i < n; ++i)
        os << (i + 1) << ',' << direct.values[i] << ',' << closed.values[i] << ','
           << (direct.values[i] - closed.values[i]) << '\n';
}

inline void write_paths_csv(std::ostream& os, const std::vector<SamplePath>& paths) {
    detail::CsvPrecision guard(os);
    os << "path_id,index,interarrival\n";
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (std::size_t i = 0; i < paths[p].interarrivals.size(); ++i)
            os << p << ',' << i << ',' << paths[p].interarrivals[i] << '\n';
}

}  // namespace rapcert
