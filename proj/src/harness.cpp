#include "bisphere/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "bisphere/specfun.hpp"

namespace bisphere::harness {

namespace {
constexpr double pi = std::numbers::pi;
using geometry::CartesianPoint;
using geometry::SphereConfig;
using json = nlohmann::ordered_json;
} // namespace

const char* command_name(Command c) {
    switch (c) {
        case Command::q_table: return "q-table";
        case Command::c_h: return "c-h";
        case Command::exact_profile: return "exact-profile";
        case Command::blowup_profile: return "blowup-profile";
        case Command::compare: return "compare";
        case Command::field_map: return "field-map";
        case Command::rate_study: return "rate-study";
        case Command::invariants: return "invariants";
    }
    return "?";
}

const char* format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::vector<double> RunConfig::thetas_or_default() const {
    if (!theta_list.empty()) return theta_list;
    return {0.0, 0.15, 0.30, 0.45, 0.60, 0.75, 0.90, 1.00};
}

namespace {

std::string fmt_list(const std::vector<double>& v, int precision) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i], precision);
    }
    return out;
}

// Full key=value echo of the configuration; output files embed this so a run
// is reproducible from its artifact alone.
std::vector<std::pair<std::string, std::string>> provenance(const RunConfig& rc) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("version", version);
    kv.emplace_back("command", command_name(rc.command));
    kv.emplace_back("r1", format_double(rc.r1, 17));
    kv.emplace_back("r2", format_double(rc.r2, 17));
    kv.emplace_back("r2-list", fmt_list(rc.r2_list, 17));
    kv.emplace_back("eps", fmt_list(rc.eps_list, 17));
    kv.emplace_back("field", fmt_list(rc.field_b, 17));
    kv.emplace_back("h0", format_double(rc.field_h0, 17));
    kv.emplace_back("e0", format_double(rc.e0, 17));
    kv.emplace_back("tol", format_double(rc.tol, 17));
    kv.emplace_back("terms-cap", std::to_string(rc.terms_cap));
    kv.emplace_back("format", format_name(rc.format));
    kv.emplace_back("grid", std::to_string(rc.grid_nx) + "x" + std::to_string(rc.grid_ny));
    kv.emplace_back("theta-list", fmt_list(rc.theta_list, 17));
    kv.emplace_back("kmax", std::to_string(rc.k_max));
    kv.emplace_back("precision", std::to_string(rc.precision));
    return kv;
}

long truncation_for(const SphereConfig& cfg, double tol, long cap) {
    // Geometric envelope e^{-(2n+1) min(xi1, xi2)/2} < tol, with headroom for
    // the polynomial prefactors; evaluation stops early once its own tail
    // bound clears tol, so the ceiling is cheap.
    const double decay = 0.5 * std::min(cfg.xi1, cfg.xi2);
    const long n = static_cast<long>(std::ceil(-std::log(tol * 1e-3) / (2.0 * decay))) + 16;
    return std::min(3 * n + 1000, cap);
}

void progress(std::ostream& err, double eps, const char* what) {
    if (eps <= 1e-6) err << "# eps=" << eps << ": " << what << " (long series)\n";
}

} // namespace

Table q_table(const RunConfig& rc) {
    Table t;
    t.columns = {"r2"};
    for (int k = 1; k <= rc.k_max; ++k) t.columns.push_back("Q" + std::to_string(k));
    const std::vector<double> r2s = rc.r2_list.empty() ? std::vector<double>{rc.r2} : rc.r2_list;
    for (double r2 : r2s) {
        std::vector<std::string> row{format_double(r2, rc.precision)};
        for (int k = 1; k <= rc.k_max; ++k)
            row.push_back(format_double(asymptotic::q_coefficient(k, rc.r1, r2), rc.precision));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table compare_table(const RunConfig& rc) {
    Table t;
    t.columns = {"eps", "theta_over_pi", "exact", "asymptotic", "difference", "converged"};
    const double c_h = asymptotic::concentration_factor_limit(exact::AxialField::uniform(rc.e0),
                                                              rc.r1, rc.r2);
    for (double eps : rc.eps_list) {
        const SphereConfig cfg = geometry::make_config(rc.r1, rc.r2, eps);
        const long n_max = truncation_for(cfg, rc.tol, rc.terms_cap);
        progress(std::cerr, eps, "boundary series");
        // a convergence failure marks the affected rows instead of aborting
        std::optional<exact::UniformSolution> us;
        try {
            us.emplace(cfg, rc.e0, n_max, rc.tol);
        } catch (const convergence_error&) {
        }
        for (double tp : rc.thetas_or_default()) {
            const double theta = tp * pi;
            bool converged = us.has_value();
            double ex = std::numeric_limits<double>::quiet_NaN();
            double as = std::numeric_limits<double>::quiet_NaN();
            try {
                as = c_h * asymptotic::q_boundary_b1(theta, cfg);
                if (us) {
                    const SeriesEval e = us->normal_derivative_b1(theta);
                    converged = e.converged;
                    ex = e.value;
                }
            } catch (const convergence_error&) {
                converged = false;
            }
            t.rows.push_back({format_double(eps, rc.precision), format_double(tp, rc.precision),
                              format_double(ex, rc.precision), format_double(as, rc.precision),
                              format_double(ex - as, rc.precision), converged ? "1" : "0"});
        }
    }
    return t;
}

Table exact_profile_table(const RunConfig& rc) {
    Table t;
    t.columns = {"eps", "theta_over_pi", "dnu_h_B1", "dnu_u_minus_H_B1"};
    for (double eps : rc.eps_list) {
        const SphereConfig cfg = geometry::make_config(rc.r1, rc.r2, eps);
        const long n_max = truncation_for(cfg, rc.tol, rc.terms_cap);
        const exact::HSeries hs(cfg, n_max, rc.tol);
        const exact::UniformSolution us(cfg, rc.e0, n_max, rc.tol);
        for (double tp : rc.thetas_or_default()) {
            const double theta = tp * pi;
            t.rows.push_back({format_double(eps, rc.precision), format_double(tp, rc.precision),
                              format_double(hs.normal_derivative_b1(theta).value, rc.precision),
                              format_double(us.normal_derivative_b1(theta).value, rc.precision)});
        }
    }
    return t;
}

Table blowup_profile_table(const RunConfig& rc) {
    Table t;
    t.columns = {"eps", "theta_over_pi", "q_B1", "CH_q_B1"};
    const double c_h = asymptotic::concentration_factor_limit(rc.field(), rc.r1, rc.r2);
    for (double eps : rc.eps_list) {
        const SphereConfig cfg = geometry::make_config(rc.r1, rc.r2, eps);
        for (double tp : rc.thetas_or_default()) {
            const double q = asymptotic::q_boundary_b1(tp * pi, cfg);
            t.rows.push_back({format_double(eps, rc.precision), format_double(tp, rc.precision),
                              format_double(q, rc.precision), format_double(c_h * q, rc.precision)});
        }
    }
    return t;
}

Table field_map_table(const RunConfig& rc) {
    if (rc.grid_nx < 2 || rc.grid_ny < 2)
        throw std::invalid_argument("field-map: grid resolution must be >= 2 per axis");
    Table t;
    t.columns = {"x1", "x3", "grad_u_asymptotic", "grad_u_exact", "in_omega_star"};
    const exact::AxialField field = rc.field();
    const double eps = rc.eps_list.front();
    const SphereConfig cfg = geometry::make_config(rc.r1, rc.r2, eps);
    const auto region = geometry::superfocus_region(cfg);
    const bool exact_available = field.is_uniform() && !field.is_zero();
    const double e0 = exact_available ? field.b()[0] : 0.0;
    const long n_max = truncation_for(cfg, rc.tol, rc.terms_cap);
    const exact::UniformSolution us(cfg, exact_available ? e0 : 1.0, n_max, rc.tol);
    const double h = 1e-5 * std::min(rc.r1, rc.r2);

    const double width = 0.75 * (rc.r1 + rc.r2);
    const double zlo = cfg.c1 - 1.25 * rc.r1;
    const double zhi = cfg.c2 + 1.25 * rc.r2;
    for (int i = 0; i < rc.grid_nx; ++i) {
        const double x1 = -width + 2.0 * width * i / (rc.grid_nx - 1);
        for (int j = 0; j < rc.grid_ny; ++j) {
            const double x3 = zlo + (zhi - zlo) * j / (rc.grid_ny - 1);
            const CartesianPoint p{x1, 0.0, x3};
            if (!geometry::in_exterior(p, cfg)) continue;
            const double ga = geometry::norm(asymptotic::gradient_asymptotic(p, cfg, field));
            std::string ge_cell;
            if (exact_available) {
                const auto d = [&](CartesianPoint lo, CartesianPoint hi) {
                    return (us.u_minus_h(hi) - us.u_minus_h(lo)) / (2.0 * h);
                };
                CartesianPoint g{d({p.x1 - h, p.x2, p.x3}, {p.x1 + h, p.x2, p.x3}),
                                 d({p.x1, p.x2 - h, p.x3}, {p.x1, p.x2 + h, p.x3}),
                                 d({p.x1, p.x2, p.x3 - h}, {p.x1, p.x2, p.x3 + h})};
                g.x3 += e0;
                ge_cell = format_double(geometry::norm(g), rc.precision);
            }
            const auto b = geometry::to_bispherical(p, cfg);
            t.rows.push_back({format_double(x1, rc.precision), format_double(x3, rc.precision),
                              format_double(ga, rc.precision), ge_cell,
                              region.contains_theta(b.theta) ? "1" : "0"});
        }
    }
    return t;
}

Table rate_study_table(const RunConfig& rc) {
    if (rc.eps_list.size() < 3)
        throw std::invalid_argument("rate-study: needs an eps list spanning >= 3 values");
    Table t;
    t.columns = {"eps",       "c_h_eps",  "c_h", "abs_diff_over_eps_ln",
                 "max_q_h",   "inv_eps_ln", "fit_slope"};
    const exact::AxialField field = rc.field();
    const double c_h = asymptotic::concentration_factor_limit(field, rc.r1, rc.r2);

    std::vector<double> log_x, log_y;
    std::vector<std::vector<std::string>> rows;
    for (double eps : rc.eps_list) {
        const SphereConfig cfg = geometry::make_config(rc.r1, rc.r2, eps);
        progress(std::cerr, eps, "concentration factor sums");
        const double che = exact::concentration_factor_eps(cfg, field, rc.tol, rc.terms_cap).value;
        const double eln = eps * std::fabs(std::log(eps));
        // max q_h over a uniform bispherical grid
        double qmax = 0.0;
        const int n_xi = 40, n_th = 80;
        for (int i = 0; i <= n_xi; ++i) {
            const double xi = -cfg.xi1 + (cfg.xi1 + cfg.xi2) * i / n_xi;
            for (int j = 1; j <= n_th; ++j)
                qmax = std::max(qmax, asymptotic::q_h_bispherical(xi, pi * j / n_th, cfg));
        }
        log_x.push_back(std::log(1.0 / eln));
        log_y.push_back(std::log(qmax));
        rows.push_back({format_double(eps, rc.precision), format_double(che, rc.precision),
                        format_double(c_h, rc.precision),
                        format_double(std::fabs(che - c_h) / eln, rc.precision),
                        format_double(qmax, rc.precision), format_double(1.0 / eln, rc.precision)});
    }
    // least-squares slope of log(max q_h) against log((eps |ln eps|)^-1)
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / v.size();
    };
    const double mx = mean(log_x), my = mean(log_y);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < log_x.size(); ++i) {
        num += (log_x[i] - mx) * (log_y[i] - my);
        den += (log_x[i] - mx) * (log_x[i] - mx);
    }
    const double slope = num / den;
    for (auto& row : rows) {
        row.push_back(format_double(slope, rc.precision));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table c_h_table(const RunConfig& rc) {
    Table t;
    t.columns = {"eps", "c_h_eps", "c_h_limit", "c_h_double_series"};
    const exact::AxialField field = rc.field();
    const double c_h = asymptotic::concentration_factor_limit(field, rc.r1, rc.r2);
    const double c_h_ds = asymptotic::c_h_double_series(field, rc.r1, rc.r2, rc.tol).value;
    for (double eps : rc.eps_list) {
        const SphereConfig cfg = geometry::make_config(rc.r1, rc.r2, eps);
        progress(std::cerr, eps, "concentration factor sums");
        const double che = exact::concentration_factor_eps(cfg, field, rc.tol, rc.terms_cap).value;
        t.rows.push_back({format_double(eps, rc.precision), format_double(che, rc.precision),
                          format_double(c_h, rc.precision), format_double(c_h_ds, rc.precision)});
    }
    return t;
}

std::vector<InvariantResult> run_invariants(const SphereConfig& cfg,
                                            const exact::AxialField& field) {
    std::vector<InvariantResult> out;
    const auto check = [&](std::string name, double residual, double threshold) {
        out.push_back({std::move(name), residual, threshold, residual <= threshold});
    };

    // geometry: derived-constant identities
    check("config.center_coth", std::max(std::fabs(cfg.a / std::tanh(cfg.xi1) + cfg.c1) / std::fabs(cfg.c1),
                                         std::fabs(cfg.a / std::tanh(cfg.xi2) - cfg.c2) / cfg.c2),
          1e-12);
    check("config.sinh_xi_radius",
          std::max(std::fabs(std::sinh(cfg.xi1) * cfg.r1 - cfg.a),
                   std::fabs(std::sinh(cfg.xi2) * cfg.r2 - cfg.a)) / cfg.a,
          1e-13);
    check("config.r_tilde_partition", std::fabs(cfg.r_tilde_1 + cfg.r_tilde_2 - 1.0), 1e-15);

    // geometry: round trip on a deterministic low-discrepancy sample
    {
        double worst = 0.0;
        double u = 0.5;
        for (int i = 0; i < 200; ++i) {
            u = std::fmod(u + 0.6180339887498949, 1.0);
            const double v = std::fmod(0.7548776662466927 * (i + 1), 1.0);
            const double wv = std::fmod(0.5698402909980532 * (i + 1), 1.0);
            const double xi = -cfg.xi1 + (cfg.xi1 + cfg.xi2) * u;
            const double theta = 1e-3 + (pi - 2e-3) * v;
            const double phi = 2.0 * pi * wv;
            const CartesianPoint p = geometry::to_cartesian({xi, theta, phi}, cfg);
            const auto b = geometry::to_bispherical(p, cfg);
            const CartesianPoint q = geometry::to_cartesian(b, cfg);
            worst = std::max(worst, geometry::norm(q - p) / std::max(1.0, geometry::norm(p)));
        }
        check("geometry.round_trip", worst, 1e-10);
    }

    // geometry: unit xi vector and reflections
    {
        double worst_norm = 0.0;
        for (int i = 1; i <= 50; ++i) {
            const double xi = -cfg.xi1 + (cfg.xi1 + cfg.xi2) * i / 51.0;
            const CartesianPoint p = geometry::to_cartesian({xi, 2.0 * pi / 3.0, 0.3}, cfg);
            worst_norm =
                std::max(worst_norm, std::fabs(geometry::norm(geometry::unit_xi_vector(p, cfg)) - 1.0));
        }
        check("geometry.unit_xi_norm", worst_norm, 1e-10);
        const CartesianPoint p1 = cfg.pole(1);
        const CartesianPoint p2 = cfg.pole(2);
        const double fixed1 = geometry::norm(geometry::reflect(1, geometry::reflect(2, p1, cfg), cfg) - p1);
        const double fixed2 = geometry::norm(geometry::reflect(2, geometry::reflect(1, p2, cfg), cfg) - p2);
        check("geometry.reflection_fixed_points", std::max(fixed1, fixed2) / cfg.a, 1e-10);
    }

    // specfun spot identities
    {
        const double gamma = specfun::euler_gamma();
        check("specfun.digamma_gamma", std::fabs(specfun::polygamma(0, 1.0) + gamma), 1e-12);
        check("specfun.zeta2", std::fabs(specfun::riemann_zeta_int(2) - pi * pi / 6.0), 1e-13);
        double worst = 0.0;
        for (int k = 0; k <= 5; ++k)
            for (double z : {0.1, 0.3, 0.5, 1.0, 2.0, 7.0}) {
                double kfac = 1.0;
                for (int i = 2; i <= k; ++i) kfac *= i;
                const double lhs = specfun::polygamma(k, z + 1.0);
                const double step = (k % 2 == 0 ? 1.0 : -1.0) * kfac * std::pow(z, -(k + 1));
                const double rhs = specfun::polygamma(k, z) + step;
                const double scale =
                    std::max({1.0, std::fabs(lhs), std::fabs(step), std::fabs(specfun::polygamma(k, z))});
                worst = std::max(worst, std::fabs(lhs - rhs) / scale);
            }
        check("specfun.polygamma_recurrence", worst, 1e-11);
    }

    // h series: boundary constancy and unit fluxes
    {
        const long n_max = truncation_for(cfg, 1e-10, exact::default_term_cap);
        const exact::HSeries hs(cfg, n_max, 1e-10);
        double spread1 = 0.0, spread2 = 0.0;
        for (int i = 0; i <= 24; ++i) {
            const double theta = pi * i / 24.0;
            spread1 = std::max(spread1, std::fabs(hs.eval_bispherical(-cfg.xi1, theta).value - hs.c1()));
            spread2 = std::max(spread2, std::fabs(hs.eval_bispherical(cfg.xi2, theta).value - hs.c2()));
        }
        check("exact.h_boundary_constancy", std::max(spread1, spread2) / std::fabs(hs.c1()), 1e-6);

        const auto flux = [&](int j) {
            return exact::flux_quadrature(
                       cfg, [&](double theta) { return hs.normal_derivative(j, theta).value; }, j, 96)
                .value;
        };
        check("exact.h_flux_B1", std::fabs(flux(1) - 1.0), 1e-6);
        check("exact.h_flux_B2", std::fabs(flux(2) + 1.0), 1e-6);

        // series vs image charges
        const exact::ImageChargeSet ics(cfg, 1 + static_cast<int>(
            std::ceil(-std::log(1e-9) / cfg.xi_sum())));
        double worst = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double xi = -cfg.xi1 + (cfg.xi1 + cfg.xi2) * (i + 0.5) / 40.0;
            const double theta = pi * std::fmod(0.618 * (i + 1), 1.0);
            const CartesianPoint p = geometry::to_cartesian({xi, std::max(theta, 0.05), 0.0}, cfg);
            worst = std::max(worst, std::fabs(hs.eval(p) - exact::h_via_images(ics, p)));
        }
        check("exact.h_series_vs_images", worst / std::fabs(hs.c1()), 1e-5);
    }

    // asymptotics
    {
        const auto mu = asymptotic::mu_constants(cfg);
        check("asymptotic.mu_partition", std::fabs(mu.mu1 + mu.mu2 - 1.0), 1e-14);
        double worst = 0.0;
        for (int i = 0; i <= 16; ++i) {
            const double theta = pi * i / 16.0;
            worst = std::max(worst, std::fabs(asymptotic::q_h_bispherical(-cfg.xi1, theta, cfg) -
                                              asymptotic::q_boundary_b1(theta, cfg)));
        }
        check("asymptotic.q_h_boundary_restriction", worst, 1e-12);
    }

    // decomposition identity for the uniform part of the field
    {
        const double e0 = field.is_zero() ? 1.0 : (field.b().empty() ? 1.0 : field.b()[0]);
        const exact::AxialField uniform = exact::AxialField::uniform(e0 == 0.0 ? 1.0 : e0);
        const long n_max = truncation_for(cfg, 1e-10, exact::default_term_cap);
        const auto id = exact::potential_difference_identity_check(cfg, uniform, n_max, 96);
        check("exact.potential_difference_identity", id.residual / std::fabs(id.lhs), 1e-5);
        const double che = exact::concentration_factor_eps(cfg, uniform, 1e-10).value;
        const exact::UniformSolution us(cfg, uniform.b()[0], n_max, 1e-10);
        auto [c1, c2] = exact::boundary_constants(cfg);
        const double via_u = (us.boundary_potential(1) - us.boundary_potential(2)) / (c1 - c2);
        check("exact.c_h_eps_decomposition", std::fabs(che - via_u) / std::fabs(via_u), 1e-4);
    }

    return out;
}

Table invariants_table(const RunConfig& rc, bool& all_pass) {
    const SphereConfig cfg = geometry::make_config(rc.r1, rc.r2, rc.eps_list.front());
    const auto results = run_invariants(cfg, rc.field());
    Table t;
    t.columns = {"invariant", "residual", "threshold", "status"};
    all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        t.rows.push_back({r.name, format_double(r.residual, 3), format_double(r.threshold, 3),
                          r.pass ? "pass" : "FAIL"});
    }
    return t;
}

void write_output(const RunConfig& rc, const Table& table, std::ostream& os) {
    const auto prov = provenance(rc);
    if (rc.format == OutputFormat::csv) {
        for (const auto& [k, v] : prov) os << "# " << k << "=" << v << "\n";
        for (std::size_t i = 0; i < table.columns.size(); ++i)
            os << (i ? "," : "") << table.columns[i];
        os << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
    } else {
        json j;
        json cfg = json::object();
        for (const auto& [k, v] : prov) cfg[k] = v;
        j["config"] = cfg;
        j["columns"] = table.columns;
        json rows = json::array();
        for (const auto& row : table.rows) rows.push_back(row);
        j["rows"] = rows;
        os << j.dump(2) << "\n";
    }
}

int run(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    try {
        for (double eps : rc.eps_list)
            if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
        if (!(rc.r1 > 0.0) || !(rc.r2 > 0.0)) throw std::invalid_argument("radii must be positive");

        Table table;
        bool invariants_pass = true;
        switch (rc.command) {
            case Command::q_table: table = q_table(rc); break;
            case Command::c_h: table = c_h_table(rc); break;
            case Command::exact_profile: table = exact_profile_table(rc); break;
            case Command::blowup_profile: table = blowup_profile_table(rc); break;
            case Command::compare: table = compare_table(rc); break;
            case Command::field_map: table = field_map_table(rc); break;
            case Command::rate_study: table = rate_study_table(rc); break;
            case Command::invariants: table = invariants_table(rc, invariants_pass); break;
        }
        if (rc.out_path.empty()) {
            write_output(rc, table, out);
        } else {
            std::ofstream f(rc.out_path, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot open output path: " + rc.out_path);
            write_output(rc, table, f);
        }
        if (rc.command == Command::invariants && !invariants_pass) {
            err << "invariant failures detected\n";
            return 1;
        }
        return 0;
    } catch (const convergence_error& e) {
        err << "convergence failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        err << "usage error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace bisphere::harness
