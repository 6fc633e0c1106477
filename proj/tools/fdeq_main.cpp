// fdeq: command-line front end. Every subcommand emits either a human-readable
// table or JSON with an embedded run manifest; equal argv (including --seed)
// reproduces the JSON byte for byte when the timestamp is suppressed.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdeq/collision.hpp"
#include "fdeq/density.hpp"
#include "fdeq/equilibrium.hpp"
#include "fdeq/fermi.hpp"
#include "fdeq/geometry.hpp"
#include "fdeq/version.hpp"

using json = nlohmann::ordered_json;

namespace {

struct GlobalOptions {
    bool json_out = false;
    std::string format = "table"; // table | json | csv
    bool no_timestamp = false;
    unsigned workers = 1;
    std::uint64_t seed = 0;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;

    fdeq::QuadratureSpec quad() const { return {abs_tol, rel_tol, 4000}; }
};

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json make_manifest(const std::string& subcommand, const json& flags, const GlobalOptions& g) {
    json m;
    m["subcommand"] = subcommand;
    m["flags"] = flags;
    m["seed"] = g.seed;
    m["version"] = fdeq::kVersion;
    if (!g.no_timestamp) m["timestamp"] = iso_timestamp();
    return m;
}

void emit(const GlobalOptions& g, const std::string& subcommand, const json& flags,
          const json& result, bool pass) {
    const bool as_json = g.json_out || g.format == "json";
    if (as_json) {
        json out;
        out["schema"] = fdeq::kJsonSchema;
        out["manifest"] = make_manifest(subcommand, flags, g);
        out["result"] = result;
        out["status"] = pass ? "ok" : "fail";
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("%s\n", subcommand.c_str());
        for (const auto& [key, value] : result.items()) {
            if (value.is_number_float())
                std::printf("  %-24s %.12g\n", key.c_str(), value.get<double>());
            else
                std::printf("  %-24s %s\n", key.c_str(), value.dump().c_str());
        }
        std::printf("  %-24s %s\n", "status", pass ? "ok" : "fail");
    }
}

json vec_to_json(const fdeq::Vec& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

fdeq::Density density_from_flags(const std::string& kind, double a, double b, double radius,
                                 double eps, int n) {
    if (kind == "fd") return fdeq::make_fermi_dirac(a, b, {}, n);
    if (kind == "ball") return fdeq::make_ball(radius, {}, n);
    if (kind == "annulus") return fdeq::make_annulus(eps, n);
    throw fdeq::DomainError("unknown density kind: " + kind);
}

int run(int argc, char** argv) {
    CLI::App app{"Equilibrium toolkit for Fermi-Dirac velocity densities"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_flag("--json", g.json_out, "emit JSON instead of a table");
    app.add_option("--format", g.format, "output format: table|json|csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_flag("--no-timestamp", g.no_timestamp, "omit the manifest timestamp (comparison mode)");
    app.add_option("--workers", g.workers, "Monte-Carlo worker threads (result-invariant)");
    app.add_option("--seed", g.seed, "random seed for every sampled quantity");
    app.add_option("--abs-tol", g.abs_tol, "quadrature absolute tolerance");
    app.add_option("--rel-tol", g.rel_tol, "quadrature relative tolerance");

    // fermi-int -------------------------------------------------------------
    auto* fi = app.add_subcommand("fermi-int", "Fermi-type integrals and their identities");
    int fi_n = 3;
    double fi_s = 1.0, fi_t = 1.0;
    bool fi_curve = false;
    double fi_tmin = 1e-2, fi_tmax = 1e2;
    int fi_points = 50;
    fi->add_option("--n", fi_n, "dimension (>= 2)")->required();
    fi->add_option("--s", fi_s, "integral order s >= 0");
    fi->add_option("--t", fi_t, "argument t > 0");
    fi->add_flag("--curve", fi_curve, "emit a log-spaced curve of P(t) instead of one point");
    fi->add_option("--t-min", fi_tmin, "curve start");
    fi->add_option("--t-max", fi_tmax, "curve end");
    fi->add_option("--points", fi_points, "curve point count");

    // moments ---------------------------------------------------------------
    auto* mo = app.add_subcommand("moments", "moments and entropy of a radial CSV density");
    std::string mo_input;
    int mo_n = 3;
    mo->add_option("--input", mo_input, "CSV with columns r,value")->required();
    mo->add_option("--n", mo_n, "dimension")->required();

    // classify ----------------------------------------------------------------
    auto* cl = app.add_subcommand("classify", "classify moments into the two regimes");
    int cl_n = 3;
    double cl_m0 = 0.0, cl_m2 = 0.0, cl_tol = 1e-9;
    cl->add_option("--n", cl_n, "dimension")->required();
    cl->add_option("--m0", cl_m0, "mass M0 > 0")->required();
    cl->add_option("--m2", cl_m2, "second moment M2 > 0")->required();
    cl->add_option("--tol", cl_tol, "relative width of the threshold band");

    // invert ------------------------------------------------------------------
    auto* iv = app.add_subcommand("invert", "recover Fermi-Dirac (a, b) from moments");
    int iv_n = 3;
    double iv_m0 = 0.0, iv_m2 = 0.0;
    iv->add_option("--n", iv_n, "dimension")->required();
    iv->add_option("--m0", iv_m0, "mass M0 > 0")->required();
    iv->add_option("--m2", iv_m2, "second moment M2 > 0")->required();

    // residual / dissipation shared flags --------------------------------------
    auto add_density_flags = [](CLI::App* cmd, int& n, std::string& kind, double& a, double& b,
                                double& radius, double& eps, std::uint64_t& samples) {
        cmd->add_option("--n", n, "dimension")->required();
        cmd->add_option("--kind", kind, "density kind: fd|ball|annulus")->required();
        cmd->add_option("--a", a, "Fermi-Dirac a > 0");
        cmd->add_option("--b", b, "Fermi-Dirac b > 0");
        cmd->add_option("--R", radius, "ball radius");
        cmd->add_option("--eps", eps, "annulus inner radius");
        cmd->add_option("--samples", samples, "Monte-Carlo samples");
    };

    auto* re = app.add_subcommand("residual", "equilibrium residual at radial sample points");
    int re_n = 2;
    std::string re_kind = "fd";
    double re_a = 1.0, re_b = 1.0, re_R = 1.0, re_eps = 0.5;
    std::uint64_t re_samples = 100000;
    int re_points = 12;
    add_density_flags(re, re_n, re_kind, re_a, re_b, re_R, re_eps, re_samples);
    re->add_option("--points", re_points, "number of radial sample points");

    auto* di = app.add_subcommand("dissipation", "entropy-production estimate");
    int di_n = 2;
    std::string di_kind = "fd";
    double di_a = 1.0, di_b = 1.0, di_R = 1.0, di_eps = 0.5;
    std::uint64_t di_samples = 100000;
    add_density_flags(di, di_n, di_kind, di_a, di_b, di_R, di_eps, di_samples);

    // geometry ------------------------------------------------------------------
    auto* ge = app.add_subcommand("geometry", "ball-characterization checks");
    ge->require_subcommand(1);
    auto* gc = ge->add_subcommand("check", "sample the mid-sphere condition on a shape");
    std::string gc_shape = "ball";
    int gc_n = 2;
    double gc_eps = 0.5, gc_R = 1.0, gc_slack = -1.0;
    std::uint64_t gc_pairs = 10000;
    gc->add_option("--shape", gc_shape, "ball|reuleaux|annulus")->required();
    gc->add_option("--n", gc_n, "dimension (reuleaux is 2-d only)");
    gc->add_option("--eps", gc_eps, "annulus inner radius");
    gc->add_option("--R", gc_R, "ball radius");
    gc->add_option("--pairs", gc_pairs, "number of sampled (x, y, sigma) triples");
    gc->add_option("--slack", gc_slack, "membership slack (default 1e-9 * diameter)");

    auto* gl = ge->add_subcommand("lambda", "minimum sphere-fraction estimate for a shape");
    std::string gl_shape = "annulus";
    int gl_n = 2;
    double gl_eps = 0.5, gl_R = 1.0;
    std::uint64_t gl_pairs = 200, gl_dirs = 4096;
    gl->add_option("--shape", gl_shape, "ball|annulus|reuleaux");
    gl->add_option("--n", gl_n, "dimension");
    gl->add_option("--eps", gl_eps, "annulus inner radius");
    gl->add_option("--R", gl_R, "ball radius");
    gl->add_option("--pairs", gl_pairs, "sampled pairs in E x E");
    gl->add_option("--directions", gl_dirs, "directions per pair");

    // verify ----------------------------------------------------------------------
    auto* ve = app.add_subcommand("verify", "classify a density from its moments and verify all legs");
    int ve_n = 2;
    std::string ve_kind = "fd";
    double ve_a = 1.0, ve_b = 1.0, ve_R = 1.0, ve_eps = 0.5;
    std::uint64_t ve_samples = 0; // unused; kept for flag-family symmetry
    add_density_flags(ve, ve_n, ve_kind, ve_a, ve_b, ve_R, ve_eps, ve_samples);

    // global flags may appear after the subcommand
    for (CLI::App* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough(true);
        for (CLI::App* nested : sub->get_subcommands(nullptr)) nested->fallthrough(true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help() << "\nerror: " << e.what() << "\n";
        return 2;
    }

    const fdeq::QuadratureSpec spec = g.quad();

    if (fi->parsed()) {
        json flags = {{"n", fi_n}, {"s", fi_s}, {"t", fi_t}};
        if (fi_curve) {
            flags["curve"] = true;
            if (g.format == "csv") {
                std::printf("t,I_s,J_s,P\n");
                for (int i = 0; i < fi_points; ++i) {
                    const double t =
                        fi_tmin * std::pow(fi_tmax / fi_tmin, double(i) / (fi_points - 1));
                    std::printf("%.17g,%.17g,%.17g,%.17g\n", t, fdeq::fermi_I(fi_s, t, spec),
                                fdeq::fermi_J(fi_s, t, spec), fdeq::fermi_P(t, fi_n, spec));
                }
                return 0;
            }
            json rows = json::array();
            for (int i = 0; i < fi_points; ++i) {
                const double t = fi_tmin * std::pow(fi_tmax / fi_tmin, double(i) / (fi_points - 1));
                rows.push_back({{"t", t},
                                {"I_s", fdeq::fermi_I(fi_s, t, spec)},
                                {"J_s", fdeq::fermi_J(fi_s, t, spec)},
                                {"P", fdeq::fermi_P(t, fi_n, spec)}});
            }
            emit(g, "fermi-int", flags, {{"curve", rows}}, true);
            return 0;
        }
        const double I = fdeq::fermi_I(fi_s, fi_t, spec);
        const double J = fdeq::fermi_J(fi_s, fi_t, spec);
        const double J2 = fdeq::fermi_J(fi_s + 2.0, fi_t, spec);
        const double ibp = std::abs(I - 2.0 * fi_t / (fi_s + 1.0) * J2) / I;
        json result = {{"I_s", I},
                       {"J_s", J},
                       {"J_s_plus_2", J2},
                       {"ibp_residual_rel", ibp},
                       {"P", fdeq::fermi_P(fi_t, fi_n, spec)},
                       {"threshold", fdeq::moment_ratio_threshold(fi_n)}};
        emit(g, "fermi-int", flags, result, true);
        return 0;
    }

    if (mo->parsed()) {
        json flags = {{"input", mo_input}, {"n", mo_n}};
        const fdeq::Density f = fdeq::load_radial_grid_csv(mo_input, mo_n);
        const fdeq::Moments m = fdeq::compute_moments(f, spec);
        json result = {{"m0", m.m0},
                       {"m2", m.m2},
                       {"ratio", m.ratio()},
                       {"threshold", fdeq::moment_ratio_threshold(mo_n)},
                       {"entropy", fdeq::entropy(f, spec)},
                       {"center", vec_to_json(m.center)}};
        emit(g, "moments", flags, result, true);
        return 0;
    }

    if (cl->parsed()) {
        json flags = {{"n", cl_n}, {"m0", cl_m0}, {"m2", cl_m2}, {"tol", cl_tol}};
        const fdeq::Moments m{cl_m0, cl_m2, fdeq::zeros(cl_n), cl_n};
        const fdeq::Classification cls = fdeq::classify(m, cl_tol, spec);
        json result = {{"ratio", cls.ratio}, {"threshold", cls.threshold}};
        bool ok = true;
        if (cls.is_fermi_dirac()) {
            const auto& r = std::get<fdeq::RegimeI>(cls.regime);
            result["regime"] = "fermi-dirac";
            result["a"] = r.a;
            result["b"] = r.b;
        } else if (cls.is_ball()) {
            result["regime"] = "ball";
            result["R"] = std::get<fdeq::RegimeII>(cls.regime).radius;
        } else {
            result["regime"] = "infeasible";
            ok = false;
        }
        emit(g, "classify", flags, result, ok);
        return ok ? 0 : 1;
    }

    if (iv->parsed()) {
        json flags = {{"n", iv_n}, {"m0", iv_m0}, {"m2", iv_m2}};
        const fdeq::Moments m{iv_m0, iv_m2, fdeq::zeros(iv_n), iv_n};
        const auto [a, b] = fdeq::invert_parameters(m, spec);
        const double m0_back = fdeq::fermi_dirac_moment(0, a, b, iv_n, spec);
        const double m2_back = fdeq::fermi_dirac_moment(2, a, b, iv_n, spec);
        json result = {{"a", a},
                       {"b", b},
                       {"residual_m0_rel", std::abs(m0_back - iv_m0) / iv_m0},
                       {"residual_m2_rel", std::abs(m2_back - iv_m2) / iv_m2}};
        emit(g, "invert", flags, result, true);
        return 0;
    }

    if (re->parsed()) {
        json flags = {{"n", re_n},    {"kind", re_kind},       {"a", re_a},
                      {"b", re_b},    {"R", re_R},             {"eps", re_eps},
                      {"samples", re_samples}, {"points", re_points}};
        const fdeq::Density f = density_from_flags(re_kind, re_a, re_b, re_R, re_eps, re_n);
        const fdeq::McConfig mc{g.seed, re_samples, g.workers};
        const auto pts = fdeq::radial_sample_points(f, re_points, 1.3, spec);
        const auto rep = fdeq::equilibrium_residual(f, pts, spec, mc);
        json per_point = json::array();
        for (const auto& p : rep.points)
            per_point.push_back({{"r", fdeq::distance(p.v, fdeq::density_center(f))},
                                 {"f", p.f_value},
                                 {"gain", p.gain.mean},
                                 {"loss", p.loss.mean},
                                 {"residual", p.residual.mean},
                                 {"residual_se", p.residual.std_error}});
        const bool ok = rep.equilibrium_pass();
        json result = {{"residual_norm", rep.residual_norm},
                       {"tolerance", rep.tolerance()},
                       {"rate_scale", rep.rate_scale},
                       {"equilibrium", ok},
                       {"points", per_point}};
        emit(g, "residual", flags, result, ok);
        return ok ? 0 : 1;
    }

    if (di->parsed()) {
        json flags = {{"n", di_n}, {"kind", di_kind}, {"a", di_a},
                      {"b", di_b}, {"R", di_R},       {"eps", di_eps},
                      {"samples", di_samples}};
        const fdeq::Density f = density_from_flags(di_kind, di_a, di_b, di_R, di_eps, di_n);
        const fdeq::McConfig mc{g.seed, di_samples, g.workers};
        const auto est = fdeq::dissipation_estimate(f, mc, spec);
        const fdeq::Moments m = fdeq::compute_moments(f, spec);
        const double floor = 1e-9 * m.m0 * m.m0 * fdeq::sphere_area(di_n);
        const bool null_ok = !est.infinite() && est.value <= 3.0 * est.std_error + floor;
        json result = {{"value", est.reported_value()},
                       {"finite_part", est.value},
                       {"std_error", est.std_error},
                       {"infinite_samples", est.infinite_samples},
                       {"null_within_noise", null_ok}};
        emit(g, "dissipation", flags, result, null_ok);
        return null_ok ? 0 : 1;
    }

    if (gc->parsed()) {
        json flags = {{"shape", gc_shape}, {"n", gc_n},          {"eps", gc_eps},
                      {"R", gc_R},         {"pairs", gc_pairs},  {"slack", gc_slack}};
        fdeq::ShapeOracle shape;
        if (gc_shape == "ball")
            shape = fdeq::make_ball_shape(gc_R, {}, gc_n);
        else if (gc_shape == "annulus")
            shape = fdeq::make_annulus_shape(gc_eps, gc_n);
        else if (gc_shape == "reuleaux")
            shape = fdeq::make_reuleaux_shape();
        else
            throw fdeq::DomainError("unknown shape: " + gc_shape);
        const fdeq::McConfig mc{g.seed, gc_pairs, g.workers};
        const auto rep = fdeq::check_midsphere_condition(shape, mc, gc_slack);
        json witnesses = json::array();
        for (const auto& w : rep.failures)
            witnesses.push_back({{"x", vec_to_json(w.x)},
                                 {"y", vec_to_json(w.y)},
                                 {"sigma", vec_to_json(w.sigma)},
                                 {"candidate1", vec_to_json(w.candidate_plus)},
                                 {"candidate2", vec_to_json(w.candidate_minus)}});
        json result = {{"pairs_tested", rep.pairs_tested},
                       {"failure_count", rep.failure_count},
                       {"pass", rep.pass},
                       {"witnesses", witnesses}};
        emit(g, "geometry check", flags, result, rep.pass);
        return rep.pass ? 0 : 1;
    }

    if (gl->parsed()) {
        json flags = {{"shape", gl_shape}, {"n", gl_n},         {"eps", gl_eps},
                      {"R", gl_R},         {"pairs", gl_pairs}, {"directions", gl_dirs}};
        fdeq::ShapeOracle shape;
        double bound = 0.0;
        if (gl_shape == "ball") {
            shape = fdeq::make_ball_shape(gl_R, {}, gl_n);
            bound = 1.0;
        } else if (gl_shape == "annulus") {
            shape = fdeq::make_annulus_shape(gl_eps, gl_n);
            bound = fdeq::annulus_lambda_lower_bound(gl_eps, gl_n, spec);
        } else if (gl_shape == "reuleaux") {
            shape = fdeq::make_reuleaux_shape();
        } else {
            throw fdeq::DomainError("unknown shape: " + gl_shape);
        }
        const fdeq::McConfig mc{g.seed, gl_pairs, g.workers};
        const auto est = fdeq::lambda_estimate(shape, mc, gl_dirs);
        json result = {{"lambda_hat", est.lambda_hat},
                       {"std_error", est.std_error},
                       {"pairs", est.pairs},
                       {"closed_form_lower_bound", bound},
                       {"worst_v", vec_to_json(est.worst_v)},
                       {"worst_v_star", vec_to_json(est.worst_v_star)}};
        emit(g, "geometry lambda", flags, result, true);
        return 0;
    }

    if (ve->parsed()) {
        json flags = {{"n", ve_n}, {"kind", ve_kind}, {"a", ve_a},
                      {"b", ve_b}, {"R", ve_R},       {"eps", ve_eps}};
        const fdeq::Density f = density_from_flags(ve_kind, ve_a, ve_b, ve_R, ve_eps, ve_n);
        const fdeq::Moments m = fdeq::compute_moments(f, spec);
        const fdeq::Classification cls = fdeq::classify(m, 1e-9, spec);
        const auto rep = fdeq::verify_classification(f, cls, spec);
        json result = {{"regime", cls.is_fermi_dirac() ? "fermi-dirac"
                                  : cls.is_ball()      ? "ball"
                                                       : "infeasible"},
                       {"ratio", rep.ratio},
                       {"threshold", rep.threshold},
                       {"entropy", rep.entropy_value},
                       {"entropy_pass", rep.entropy_pass},
                       {"ratio_pass", rep.ratio_pass},
                       {"form_residual", rep.form_residual},
                       {"form_pass", rep.form_pass},
                       {"pass", rep.pass()}};
        emit(g, "verify", flags, result, rep.pass());
        return rep.pass() ? 0 : 1;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fdeq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
