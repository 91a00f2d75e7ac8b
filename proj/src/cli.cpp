#include "mbump/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mbump/errors.hpp"
#include "mbump/reduction.hpp"

namespace mbump {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string num(long long x) { return std::to_string(x); }
std::string num(int x) { return std::to_string(x); }
std::string num(bool x) { return x ? "1" : "0"; }

class Csv {
public:
    explicit Csv(std::initializer_list<std::string> header) { line(header); }

    template <class... T>
    void row(const T&... values) {
        std::vector<std::string> cells{cell(values)...};
        line(cells);
    }

    std::string str() const { return os_.str(); }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class T>
    static std::string cell(const T& x) {
        return num(x);
    }

    template <class C>
    void line(const C& cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) os_ << ',';
            os_ << c;
            first = false;
        }
        os_ << '\n';
    }

    std::ostringstream os_;
};

std::string csv_text(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(); }

class Stage {
public:
    Stage(std::string name, const fs::path& dir) : name_(std::move(name)), dir_(dir) {
        fs::create_directories(dir_);
        fs::remove(dir_ / "failure.json");
    }

    json summary = json::object();

    void check(const std::string& invariant, bool ok, json detail = json::object()) {
        invariants_[invariant] = ok;
        if (!ok) {
            detail["invariant"] = invariant;
            violated_.push_back(std::move(detail));
        }
    }

    void write(const std::string& file, const std::string& content) const {
        const fs::path target = dir_ / file;
        const fs::path tmp = dir_ / (file + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw Error("cannot write " + tmp.string());
            out << content;
            if (!out) throw Error("write failed for " + tmp.string());
        }
        fs::rename(tmp, target);
    }

    void write_json(const std::string& file, const json& j) const { write(file, j.dump(2) + "\n"); }

    void write_field_file(const std::string& file, const Field& f) const {
        std::ostringstream os;
        write_field(os, f);
        write(file, os.str());
    }

    int finish() {
        summary["subcommand"] = name_;
        summary["invariants"] = invariants_;
        summary["passed"] = violated_.empty();
        write_json("summary.json", summary);
        if (violated_.empty()) return 0;
        write_json("failure.json", json{{"subcommand", name_}, {"kind", "invariant"}, {"violated", violated_}});
        return 1;
    }

    int fail(const std::string& type, const std::string& message) const {
        write_json("failure.json",
                   json{{"subcommand", name_}, {"kind", "error"}, {"error", type}, {"message", message}});
        return 2;
    }

private:
    std::string name_;
    fs::path dir_;
    json invariants_ = json::object();
    json violated_ = json::array();
};

ShootingOptions shooting(const RunConfig& c) {
    ShootingOptions o;
    o.dr = c.dr;
    return o;
}

ModelParams with_k(const ModelParams& p, int k) {
    ModelParams q = p;
    q.k = k;
    return q;
}

Problem problem_for(const RunConfig& c, const ModelParams& p, const Profiles& prof) {
    Problem prob;
    prob.params = p;
    prob.profiles = prof;
    prob.h = c.spacing();
    prob.L = c.L;
    prob.fixed_point.tol = c.tol;
    prob.fixed_point.max_iter = c.max_iter;
    return prob;
}

/// Fixes beta for the run: the configured value or f0/2 at radius R.
void resolve_beta(const RunConfig& c, Problem& prob, double R, json& summary) {
    const CouplingBound cb = coupling_bound_at(prob, R, c.safety);
    if (c.beta_auto) prob.params.beta = 0.5 * cb.f0;
    summary["gamma0"] = cb.gamma0;
    summary["gamma0_crude"] = cb.gamma0_crude;
    summary["f0"] = cb.f0;
    summary["beta"] = prob.params.beta;
    summary["beta_auto"] = c.beta_auto;
}

struct ProfileCheck {
    double residual = 0.0;  ///< max ODE residual / peak
    bool monotone = true;
    bool decay_bound = true;
};

ProfileCheck inspect(const RadialProfile& p) {
    ProfileCheck out;
    for (double r : ode_residual(p)) out.residual = std::max(out.residual, r / p.peak());
    const auto& w = p.values();
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (!(w[j] > 0.0) || (j > 0 && !(w[j] < w[j - 1]))) out.monotone = false;
        const double r = p.radius(j);
        const double envelope = p.M() * std::exp(-std::sqrt(p.mass()) * r) *
                                std::min(1.0, std::pow(r, -0.5 * (p.dim() - 1)));
        if (w[j] > envelope * (1.0 + 1e-12)) out.decay_bound = false;
    }
    return out;
}

std::string profile_csv(const RadialProfile& p) {
    std::ostringstream os;
    write_profile_csv(os, p);
    return os.str();
}

int ground_state(const RunConfig& c, Stage& st) {
    const ModelParams& p = c.params;
    ShootingOptions fine = shooting(c);
    fine.dr *= 0.5;
    struct Species {
        const char* name;
        double mass;
        double alpha;
    };
    const Species species[] = {{"U0", p.lambda, p.alpha0}, {"V0", 1.0, p.alpha1}};
    Csv table({"species", "c", "alpha", "N", "peak", "M", "moment2", "moment4", "moment2_fine", "moment2_rel_diff",
               "max_residual_rel"});
    for (const Species& s : species) {
        const RadialProfile prof = solve_ground_state(s.mass, s.alpha, p.dim, shooting(c));
        const RadialProfile half = solve_ground_state(s.mass, s.alpha, p.dim, fine);
        const ProfileCheck chk = inspect(prof);
        const double rel = std::abs(prof.moment2() - half.moment2()) / half.moment2();
        table.row(std::string(s.name), s.mass, s.alpha, p.dim, prof.peak(), prof.M(), prof.moment2(),
                  prof.moment4(), half.moment2(), rel, chk.residual);
        st.write(std::string("profile_") + s.name + ".csv", profile_csv(prof));
        const std::string tag = s.name;
        st.summary[tag + "_peak"] = prof.peak();
        st.summary[tag + "_M"] = prof.M();
        st.summary[tag + "_moment2"] = prof.moment2();
        st.summary[tag + "_moment4"] = prof.moment4();
        st.summary[tag + "_moment2_rel_diff"] = rel;
        st.summary[tag + "_max_residual_rel"] = chk.residual;
        st.check(tag + "_ode_residual", chk.residual < 1e-8, {{"value", chk.residual}, {"threshold", 1e-8}});
        st.check(tag + "_positive_decreasing", chk.monotone);
        st.check(tag + "_decay_bound", chk.decay_bound);
        st.check(tag + "_moment2_resolution", rel < 1e-3, {{"value", rel}, {"threshold", 1e-3}});
    }
    st.write("moments.csv", table.str());

    if (c.sech_oracle) {
        const RadialProfile s = solve_ground_state(1.0, 1.0, 1, shooting(c));
        Csv cmp({"r", "value", "exact", "error"});
        double max_err = 0.0;
        for (std::size_t j = 0; j < s.values().size(); ++j) {
            const double r = s.radius(j);
            const double exact = std::sqrt(2.0) / std::cosh(r);
            const double err = std::abs(s.values()[j] - exact);
            max_err = std::max(max_err, err);
            cmp.row(r, s.values()[j], exact, err);
        }
        st.write("sech_comparison.csv", cmp.str());
        st.summary["sech_max_error"] = max_err;
        st.check("sech_oracle", max_err < 1e-6, {{"value", max_err}, {"threshold", 1e-6}});
    }
    return st.finish();
}

int bounds(const RunConfig& c, Stage& st) {
    const ModelParams& p = c.params;
    const Profiles prof = solve_profiles(p, shooting(c));
    const double h = c.spacing();

    const ValidationReport vr = validate_potential(p, default_validation_radii(p));
    st.write_json("validation.json", vr);
    st.check("potential_assumption", vr.passed, {{"clause", vr.clause}});

    Csv ksum({"k", "R", "eta", "seed", "samples", "violations_rest", "violations_total", "max_ratio_rest",
              "max_ratio_total"});
    Csv coupling({"k", "R", "gamma0", "gamma0_crude", "f0"});
    int violations = 0;
    for (int k : c.k_list) {
        const ModelParams pk = with_k(p, k);
        const RadiusInterval sk = bump_radius_interval(k, p.m, derive_exponents(p).delta0);
        const double R = sk.mid();
        const BumpConfiguration cfg = bump_centers(k, R, p.dim);
        const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(k);
        const auto pts = sector_samples(cfg, c.samples, seed, 2.0 * R + 10.0);
        for (double eta : c.etas) {
            const BoundReport br = check_ksum_bound(prof.V0, cfg, eta, pts);
            ksum.row(k, R, eta, static_cast<long long>(seed), br.samples, br.violations_rest, br.violations_total,
                     br.max_ratio_rest, br.max_ratio_total);
            violations += br.violations_rest;
        }
        const Problem prob = problem_for(c, pk, prof);
        const CouplingBound cb = coupling_bound_at(prob, R, c.safety);
        coupling.row(k, R, cb.gamma0, cb.gamma0_crude, cb.f0);
        st.check("f0_gamma0_k" + std::to_string(k), cb.f0 * cb.gamma0 < 1.0);
    }
    st.write("ksum.csv", ksum.str());
    st.write("coupling.csv", coupling.str());
    st.summary["ksum_violations"] = violations;
    st.check("ksum_bound", violations == 0, {{"violations", violations}});

    Csv mu({"R", "integral", "leading", "rel_dev"});
    std::vector<std::pair<double, double>> dev;
    for (double R : c.lemma_mu_radii) {
        const BumpConfiguration cfg = bump_centers(p.k, R, p.dim);
        const Grid g(p.dim, default_half_width(R, 1.0, h), h);
        const PotentialMoment pm = potential_moment(prof.V0, cfg, g, p);
        const double rel = std::abs(pm.integral - pm.leading) / std::abs(pm.leading);
        mu.row(R, pm.integral, pm.leading, rel);
        dev.emplace_back(R, rel);
    }
    st.write("potential_moment.csv", mu.str());
    auto dev_at = [&](double R) {
        for (const auto& [r, d] : dev)
            if (r == R) return d;
        return std::numeric_limits<double>::quiet_NaN();
    };
    const double d10 = dev_at(10.0), d20 = dev_at(20.0), d40 = dev_at(40.0);
    if (std::isfinite(d10) && std::isfinite(d20)) {
        st.summary["potential_moment_ratio_10_20"] = d10 / d20;
        st.check("potential_moment_trend", d10 / d20 >= 1.8, {{"value", d10 / d20}, {"threshold", 1.8}});
    }
    if (std::isfinite(d40)) {
        st.summary["potential_moment_rel_dev_40"] = d40;
        st.check("potential_moment_R40", d40 < 0.05, {{"value", d40}, {"threshold", 0.05}});
    }

    const CrossDecay cd = crossprod_decay(prof, p, c.cross_radii, h);
    Csv cross({"R", "value"});
    for (std::size_t i = 0; i < cd.radii.size(); ++i) cross.row(cd.radii[i], cd.values[i]);
    st.write("crossprod.csv", cross.str());
    st.summary["crossprod_gamma"] = cd.gamma;
    st.summary["crossprod_C"] = cd.C;
    const double rate = 0.5 * std::min(std::sqrt(p.lambda), 1.0);
    st.check("crossprod_decay", cd.gamma >= rate, {{"value", cd.gamma}, {"threshold", rate}});
    st.summary["seed"] = c.seed;
    return st.finish();
}

int expansion(const RunConfig& c, Stage& st) {
    const ModelParams& p = c.params;
    const Profiles prof = solve_profiles(p, shooting(c));
    Csv table({"k", "R", "direct", "model", "rho", "A0", "A1", "A2", "interaction_sum", "interaction_energy",
               "J_surrogate", "J_chord"});
    std::vector<double> rho, J;
    for (int k : c.k_list) {
        const Problem prob = problem_for(c, with_k(p, k), prof);
        const double R = prob.interval().mid();
        const AnsatzFields a = build_ansatz(prof.U0, prof.V0, prob.params, R, prob.grid());
        const ExpansionReport r = expansion_compare(prof, a);
        table.row(k, R, r.direct, r.model, r.rho, r.constants.A0, r.constants.A1, r.constants.A2,
                  r.interaction.sum, r.interaction_energy, r.interaction.J_surrogate, r.interaction.J_chord);
        rho.push_back(r.rho);
        J.push_back(r.interaction.J_chord);
    }
    st.write("expansion.csv", table.str());
    bool decreasing = true;
    for (std::size_t i = 1; i < rho.size(); ++i) decreasing = decreasing && rho[i] < rho[i - 1];
    const auto [jmin, jmax] = std::minmax_element(J.begin(), J.end());
    const double spread = (*jmax - *jmin) / *jmin;
    st.summary["rho"] = rho;
    st.summary["J_chord"] = J;
    st.summary["J_chord_spread"] = spread;
    st.check("rho_decreasing", decreasing, {{"rho", rho}});
    st.check("J_chord_spread", spread < 0.25, {{"value", spread}, {"threshold", 0.25}});
    st.check("J_positive", *jmin > 0.0);
    return st.finish();
}

int corrector(const RunConfig& c, Stage& st) {
    const ModelParams& p = c.params;
    Problem prob = problem_for(c, p, solve_profiles(p, shooting(c)));
    const RadiusInterval sk = prob.interval();
    const double R = c.R > 0.0 ? c.R : sk.mid();
    resolve_beta(c, prob, R, st.summary);
    const Exponents ex = derive_exponents(p);
    st.summary["k"] = p.k;
    st.summary["R"] = R;
    st.summary["Sk_lo"] = sk.lo;
    st.summary["Sk_hi"] = sk.hi;
    st.summary["p"] = ex.p;

    const AnsatzFields a = build_ansatz(prob.profiles.U0, prob.profiles.V0, prob.params, R, prob.grid());
    const auto write_steps = [&](const std::vector<double>& values) {
        Csv steps({"iteration", "step"});
        for (std::size_t i = 0; i < values.size(); ++i) steps.row(static_cast<int>(i + 1), values[i]);
        st.write("steps.csv", steps.str());
    };
    try {
        const CorrectorResult r = fixed_point_iterate(a, prob.fixed_point);
        st.write_json("corrector.json", r);
        write_steps(r.steps);
        st.summary["converged"] = r.converged;
        st.summary["iterations"] = r.iterations;
        st.summary["norm_E"] = r.norm_E;
        st.summary["norm_E_scaled"] = r.norm_E * std::pow(static_cast<double>(p.k), ex.p);
        st.summary["contraction_factor"] = r.contraction_factor;
        st.summary["lagrange"] = r.lagrange;
        st.check("corrector_converged", r.converged, {{"iterations", r.iterations}});
        st.check("contraction", r.contraction_factor < 1.0, {{"value", r.contraction_factor}});
        if (c.dump_fields) {
            st.write_field_file("u.field", r.u);
            st.write_field_file("v.field", r.v);
        }
    } catch (const DivergenceError& e) {
        write_steps(e.steps());
        st.summary["converged"] = false;
        st.summary["divergence"] = e.what();
        st.summary["steps"] = e.steps();
        st.check("corrector_converged", false, {{"message", e.what()}, {"steps", e.steps()}});
    }

    if (c.check_beta0) {
        ModelParams p0 = prob.params;
        p0.beta = 0.0;
        const AnsatzFields a0 = build_ansatz(prob.profiles.U0, prob.profiles.V0, p0, R, prob.grid());
        try {
            const CorrectorResult r0 = fixed_point_iterate(a0, prob.fixed_point);
            const double umax = r0.u.max_abs();
            st.summary["beta0_u_max_abs"] = umax;
            st.check("beta0_u_zero", umax == 0.0, {{"value", umax}});
        } catch (const DivergenceError& e) {
            st.check("beta0_u_zero", false, {{"message", e.what()}});
        }
    }
    return st.finish();
}

struct ScanOutcome {
    Problem prob;
    ReductionRun run;
};

ScanOutcome scan(const RunConfig& c, Stage& st) {
    const ModelParams& p = c.params;
    ScanOutcome out{problem_for(c, p, solve_profiles(p, shooting(c))), {}};
    const RadiusInterval sk = out.prob.interval();
    resolve_beta(c, out.prob, sk.mid(), st.summary);
    out.run = maximize_reduced_energy(out.prob, c.n_coarse, c.tol_R);
    const ReductionRun& run = out.run;

    Csv table({"R", "converged", "F", "main", "l", "l_display", "q", "h", "total", "decomposition_error",
               "lagrange", "iterations", "contraction_factor", "norm_E", "failure"});
    double worst = 0.0;
    int converged = 0;
    for (const auto& s : run.samples) {
        const auto& b = s.breakdown;
        const auto& r = s.corrector;
        if (!s.converged) {
            table.row(s.R, false, "", "", "", "", "", "", "", "", "", "", "", "", csv_text(s.failure));
            continue;
        }
        table.row(s.R, true, s.F, b.main, b.l_val, b.l_display, b.q_val, b.h_val, b.total, s.decomposition_error,
                  r.lagrange, r.iterations, r.contraction_factor, r.norm_E, csv_text(s.failure));
        ++converged;
        worst = std::max(worst, s.decomposition_error);
    }
    st.write("scan.csv", table.str());
    st.write_json("maximize.json", run.max);

    st.summary["k"] = p.k;
    st.summary["Sk_lo"] = sk.lo;
    st.summary["Sk_hi"] = sk.hi;
    st.summary["evaluations"] = run.samples.size();
    st.summary["converged_evaluations"] = converged;
    st.summary["found"] = run.max.found;
    st.summary["R0"] = run.max.found ? json(run.max.R0) : json();
    st.summary["F0"] = run.max.found ? json(run.max.F0) : json();
    st.summary["interior"] = run.max.interior;
    st.summary["dF_center"] = run.max.found ? finite_or_null(run.max.dF_center) : json();
    st.summary["max_abs_dF"] = run.max.max_abs_dF;
    st.summary["max_decomposition_error"] = worst;
    if (run.lagrange_available) {
        st.summary["lagrange_R0"] = run.lagrange_R0;
        st.summary["lagrange_lo"] = run.lagrange_lo;
        st.summary["lagrange_hi"] = run.lagrange_hi;
    }

    st.check("maximum_found", run.max.found, {{"converged_evaluations", converged}});
    st.check("interior_maximum", run.max.found && run.max.interior);
    st.check("critical_point", run.max.critical,
             {{"dF_center", finite_or_null(run.max.dF_center)}, {"max_abs_dF", run.max.max_abs_dF}});
    const bool lag = run.lagrange_available &&
                     std::abs(run.lagrange_R0) < std::min(std::abs(run.lagrange_lo), std::abs(run.lagrange_hi));
    st.check("lagrange_minimal_at_R0", lag);
    st.check("decomposition_exact", converged > 0 && worst < 1e-10, {{"value", worst}, {"threshold", 1e-10}});
    return out;
}

int reduce(const RunConfig& c, Stage& st) {
    scan(c, st);
    return st.finish();
}

int solve(const RunConfig& c, Stage& st) {
    const ScanOutcome sc = scan(c, st);
    if (!sc.run.max.found) {
        st.check("solution_assembled", false, {{"message", "no converged radius in S_k"}});
        return st.finish();
    }
    const double R0 = sc.run.max.R0;
    const double h = sc.prob.h;
    const Solution coarse = assemble_solution(R0, sc.prob, h);
    const Solution fine = assemble_solution(R0, sc.prob, 0.5 * h);
    st.write_field_file("U.field", coarse.U);
    st.write_field_file("V.field", coarse.V);
    Csv res({"h", "res_U", "res_V", "lagrange"});
    res.row(h, coarse.res_U, coarse.res_V, coarse.lagrange_at_R0);
    res.row(0.5 * h, fine.res_U, fine.res_V, fine.lagrange_at_R0);
    st.write("residuals.csv", res.str());
    const double ratio_U = coarse.res_U / fine.res_U;
    const double ratio_V = coarse.res_V / fine.res_V;
    st.summary["res_U"] = coarse.res_U;
    st.summary["res_V"] = coarse.res_V;
    st.summary["res_U_half"] = fine.res_U;
    st.summary["res_V_half"] = fine.res_V;
    st.summary["res_U_ratio"] = ratio_U;
    st.summary["res_V_ratio"] = ratio_V;
    st.summary["lagrange_at_R0"] = coarse.lagrange_at_R0;
    st.check("solution_assembled", true);
    st.check("residual_convergence", ratio_U >= 3.5 && ratio_V >= 3.5,
             {{"ratio_U", ratio_U}, {"ratio_V", ratio_V}, {"threshold", 3.5}});
    return st.finish();
}

std::string error_type(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const AssumptionError*>(&e)) return "AssumptionError";
    if (dynamic_cast<const GridError*>(&e)) return "GridError";
    if (dynamic_cast<const ShootingError*>(&e)) return "ShootingError";
    if (dynamic_cast<const SolverError*>(&e)) return "SolverError";
    if (dynamic_cast<const DivergenceError*>(&e)) return "DivergenceError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "std::exception";
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"ground-state", "bounds", "expansion", "corrector", "reduce", "solve"};
    return names;
}

int run(const std::string& subcommand, const RunConfig& config, const std::string& out_dir) {
    Stage st(subcommand, out_dir);
    st.write_json("config.json", config);
    try {
        if (subcommand == "ground-state") return ground_state(config, st);
        if (subcommand == "bounds") return bounds(config, st);
        if (subcommand == "expansion") return expansion(config, st);
        if (subcommand == "corrector") return corrector(config, st);
        if (subcommand == "reduce") return reduce(config, st);
        if (subcommand == "solve") return solve(config, st);
        return st.fail("ConfigError", "unknown subcommand '" + subcommand + "'");
    } catch (const std::exception& e) {
        return st.fail(error_type(e), e.what());
    }
}

int report_error(const std::string& subcommand, const std::string& out_dir, const std::exception& error) {
    Stage st(subcommand, out_dir);
    return st.fail(error_type(error), error.what());
}

}  // namespace mbump
