#include "bisphere/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bisphere/quadrature.hpp"
#include "bisphere/specfun.hpp"

namespace bisphere::asymptotic {

namespace {
constexpr double pi = std::numbers::pi;

double w_theta(double xi, double cos_theta) { return std::sqrt(std::cosh(xi) - cos_theta); }
} // namespace

MuConstants mu_constants(const SphereConfig& cfg) {
    if (!(cfg.eps <= 1.0))
        throw std::domain_error("mu_constants: the asymptotic constants require eps <= 1");
    const double gamma = specfun::euler_gamma();
    const double psi1 = specfun::polygamma(0, cfg.r_tilde_1);
    const double psi2 = specfun::polygamma(0, cfg.r_tilde_2);
    const double denom = psi1 + psi2 + 2.0 * gamma;
    MuConstants mu;
    mu.mu1 = (psi1 + gamma) / denom;
    mu.mu2 = (psi2 + gamma) / denom;
    const double bracket = std::fabs(std::log(cfg.eps)) + std::log(cfg.r_tilde) + std::log(2.0) -
                           2.0 * (psi1 * psi2 - gamma * gamma) / denom;
    mu.mu_eps = 1.0 / (2.0 * pi * cfg.r_tilde * bracket);
    return mu;
}

double q_coefficient(int k, double r1, double r2) {
    if (k < 1) throw std::domain_error("q_coefficient: requires k >= 1");
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw std::domain_error("q_coefficient: radii must be positive");
    const double rt = r1 * r2 / (r1 + r2);
    const double rt1 = r1 / (r1 + r2);
    const double rt2 = r2 / (r1 + r2);
    const double gamma = specfun::euler_gamma();
    const double d1 = specfun::polygamma(0, rt1);
    const double d2 = specfun::polygamma(0, rt2);
    const double denom = d1 + d2 + 2.0 * gamma;
    const double mu1 = (d1 + gamma) / denom;
    const double mu2 = (d2 + gamma) / denom;
    const double sign = (k % 2 == 0) ? -1.0 : 1.0; // (-1)^{k+1}
    double kfac = 1.0;
    for (int i = 2; i <= k; ++i) kfac *= i;
    return 4.0 * pi * std::pow(rt, k + 1) *
           ((mu1 + sign * mu2) * specfun::riemann_zeta_int(k + 1) +
            (mu1 * specfun::polygamma(k, rt2) + sign * mu2 * specfun::polygamma(k, rt1)) / kfac);
}

double concentration_factor_limit(const AxialField& field, double r1, double r2) {
    double c_h = 0.0;
    const auto& b = field.b();
    for (std::size_t k = 1; k <= b.size(); ++k)
        if (b[k - 1] != 0.0) c_h += b[k - 1] * q_coefficient(static_cast<int>(k), r1, r2);
    return c_h;
}

SumResult c_h_double_series(const AxialField& field, double r1, double r2, double tol) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw std::domain_error("c_h_double_series: radii must be positive");
    if (field.is_zero()) return {0.0, 0, 0.0};
    const double rt = r1 * r2 / (r1 + r2);
    const double rt1 = r1 / (r1 + r2);
    const double rt2 = r2 / (r1 + r2);
    const double gamma = specfun::euler_gamma();
    const double d1 = specfun::polygamma(0, rt1);
    const double d2 = specfun::polygamma(0, rt2);
    const double denom = d1 + d2 + 2.0 * gamma;
    const double mu1 = (d1 + gamma) / denom;
    const double mu2 = (d2 + gamma) / denom;

    // g(t) = H(t e3) - H(0); the four reflected-center ladders contribute
    //   mu1 [ z_m g(z_m) - z_{m,1} g(-z_{m,1}) ] + mu2 [ z_{m,2} g(z_{m,2}) - z_m g(-z_m) ]
    // with z_m = rt/(m+1), z_{m,1} = rt/(m+rt2), z_{m,2} = rt/(m+rt1).
    const auto g = [&](double t) { return field.axis_value(t) - field.constant_term(); };
    const auto term = [&](double m) {
        const double zm = rt / (m + 1.0);
        const double zm1 = rt / (m + rt2);
        const double zm2 = rt / (m + rt1);
        return mu1 * (zm * g(zm) - zm1 * g(-zm1)) + mu2 * (zm2 * g(zm2) - zm * g(-zm));
    };

    // Direct sum over the head; terms decay like m^-2.
    const long m_head = 4000;
    double sum = 0.0;
    for (long m = 0; m < m_head; ++m) sum += term(static_cast<double>(m));

    // Algebraic tail, k-th power ladder by ladder:
    //   sum_{m >= M} (m + alpha)^{-(k+1)}
    // completed with the Euler-Maclaurin formula (a numerical device here;
    // no zeta/polygamma closed forms enter this route).
    const auto tail_power = [&](double alpha, int k) {
        const double x = m_head + alpha;
        const double p = std::pow(x, -(k + 1));
        double t = p * x / k;      // integral
        t += 0.5 * p;              // half first term
        t += (k + 1) * p / (12.0 * x);
        t -= (k + 1) * (k + 2) * (k + 3) * p / (720.0 * x * x * x);
        return t;
    };
    const auto& b = field.b();
    double tail = 0.0;
    for (std::size_t k = 1; k <= b.size(); ++k) {
        if (b[k - 1] == 0.0) continue;
        const double rk = std::pow(rt, k + 1);
        const int ik = static_cast<int>(k);
        const double sgn = (k % 2 == 0) ? -1.0 : 1.0; // from (-z)^k
        tail += b[k - 1] * rk *
                (mu1 * (tail_power(1.0, ik) + sgn * tail_power(rt2, ik)) +
                 mu2 * (tail_power(rt1, ik) + sgn * tail_power(1.0, ik)));
    }
    SumResult res;
    res.value = 4.0 * pi * (sum + tail);
    res.terms = m_head;
    // Remaining Euler-Maclaurin error is O(M^{-(k+5)}) per ladder.
    res.tail_bound = std::fabs(4.0 * pi * tail) * std::pow(static_cast<double>(m_head), -4);
    if (res.tail_bound > tol * std::max(1.0, std::fabs(res.value)))
        throw convergence_error("c_h_double_series: tail correction above tolerance", m_head,
                                res.tail_bound);
    return res;
}

double blowup_psi(const CartesianPoint& p, const SphereConfig& cfg) {
    const MuConstants mu = mu_constants(cfg);
    const CartesianPoint centers[4] = {cfg.center(1), geometry::reflect(1, cfg.center(2), cfg),
                                       cfg.center(2), geometry::reflect(2, cfg.center(1), cfg)};
    const double weights[4] = {mu.mu1 * cfg.r1, mu.mu2 * cfg.r_tilde, mu.mu2 * cfg.r2,
                               mu.mu1 * cfg.r_tilde};
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double d = geometry::norm(p - centers[i]);
        if (d == 0.0) throw std::domain_error("blowup_psi: singular at a reflection center");
        sum += weights[i] / d;
    }
    return mu.mu_eps * cfg.r_tilde / (2.0 * cfg.a) * sum;
}

CartesianPoint gradient_asymptotic(const CartesianPoint& p, const SphereConfig& cfg,
                                   const AxialField& field) {
    if (field.is_zero()) return {};
    const double c_h = concentration_factor_limit(field, cfg.r1, cfg.r2);
    const CartesianPoint n = geometry::pole_difference_field(p, cfg);
    const double psi = blowup_psi(p, cfg);
    return c_h * psi * n + field.gradient(p);
}

double q_boundary_b1(double theta, const SphereConfig& cfg) {
    if (!(theta >= 0.0 && theta <= pi)) throw std::domain_error("q_boundary_b1: theta outside [0, pi]");
    const MuConstants mu = mu_constants(cfg);
    const double ct = std::cos(theta);
    const double s = cfg.xi_sum();
    const double w1 = w_theta(cfg.xi1, ct);
    const double f = 1.0 / (2.0 * cfg.a * s);
    return mu.mu_eps * f *
           (mu.mu1 * (w1 * w1 + w1 * w1 * w1 / w_theta(3.0 * cfg.xi1 + 2.0 * cfg.xi2, ct)) +
            mu.mu2 * 2.0 * w1 * w1 * w1 / w_theta(cfg.xi1 + 2.0 * cfg.xi2, ct));
}

double q_h_bispherical(double xi, double theta, const SphereConfig& cfg) {
    const MuConstants mu = mu_constants(cfg);
    const double ct = std::cos(theta);
    const double s = cfg.xi_sum();
    const double w3 = std::pow(w_theta(xi, ct), 3);
    const double f = 1.0 / (2.0 * cfg.a * s);
    return mu.mu_eps * f *
           (mu.mu1 * (w3 / w_theta(xi + 2.0 * cfg.xi1, ct) + w3 / w_theta(xi - 2.0 * s, ct)) +
            mu.mu2 * (w3 / w_theta(xi - 2.0 * cfg.xi2, ct) + w3 / w_theta(xi + 2.0 * s, ct)));
}

double q_h(const CartesianPoint& p, const SphereConfig& cfg) {
    const auto b = geometry::to_bispherical(p, cfg);
    return q_h_bispherical(b.xi, b.theta, cfg);
}

namespace {

// The axial line charges in the c = a cosh t parametrization; the endpoint
// factor 1/sqrt(c^2 - a^2) cancels against the line element. arccosh(coth x)
// reduces to ln coth(x/2).
double segment_extent(double x) { return std::log(1.0 / std::tanh(0.5 * x)); }

} // namespace

double rho1_total_charge(const SphereConfig& cfg) {
    const MuConstants mu = mu_constants(cfg);
    const double t1 = segment_extent(cfg.xi1);
    const double t12 = segment_extent(cfg.xi_sum());
    return cfg.r_tilde * mu.mu_eps * (mu.mu1 * t1 + mu.mu2 * t12);
}

double singular_part_hs(const CartesianPoint& p, const SphereConfig& cfg, int quad_order) {
    const MuConstants mu = mu_constants(cfg);
    const double t1 = segment_extent(cfg.xi1);
    const double t2 = segment_extent(cfg.xi2);
    const double t12 = segment_extent(cfg.xi_sum());

    const auto inv_dist = [&](double axial_sign) {
        return [&, axial_sign](double t) {
            const CartesianPoint c{0.0, 0.0, axial_sign * cfg.a * std::cosh(t)};
            const double d = geometry::norm(p - c);
            return 1.0 / d;
        };
    };
    // Points on the charged segments make the integrand singular.
    const double rho = std::hypot(p.x1, p.x2);
    const double guard = 1e-9 * cfg.r_tilde;
    if (rho < guard && std::fabs(p.x3) >= cfg.a - guard &&
        std::fabs(p.x3) <= cfg.a * std::cosh(std::max(t1, t2)) + guard)
        throw std::domain_error("singular_part_hs: point lies on a charged segment");

    const auto piece = [&](double axial_sign, double extent) {
        const QuadResult q = integrate(inv_dist(axial_sign), 0.0, extent, quad_order);
        if (q.error_estimate > 1e-8 * std::max(1.0, std::fabs(q.value)))
            throw convergence_error("singular_part_hs: quadrature failed near a segment",
                                    quad_order, q.error_estimate);
        return q.value;
    };
    const double lower = mu.mu1 * piece(-1.0, t1) + mu.mu2 * piece(-1.0, t12);
    const double upper = mu.mu2 * piece(1.0, t2) + mu.mu1 * piece(1.0, t12);
    return cfg.r_tilde * mu.mu_eps * (upper - lower);
}

BlowupSummary blowup_summary(const SphereConfig& cfg, const AxialField& field, int k_max) {
    BlowupSummary summary;
    summary.mu = mu_constants(cfg);
    summary.region = geometry::superfocus_region(cfg);
    summary.q.reserve(k_max);
    for (int k = 1; k <= k_max; ++k) summary.q.push_back(q_coefficient(k, cfg.r1, cfg.r2));
    summary.c_h = concentration_factor_limit(field, cfg.r1, cfg.r2);
    return summary;
}

SuperfocusReport superfocus_bound_check(const SphereConfig& cfg, const AxialField& field,
                                        const GridSpec& grid) {
    if (!field.is_uniform() || field.is_zero())
        throw std::domain_error("superfocus_bound_check: requires a nonzero uniform field");
    const double e0 = field.b()[0];
    const auto region = geometry::superfocus_region(cfg);
    const exact::UniformSolution us(cfg, e0, 4'000'000, 1e-10);

    const double h = 1e-5 * std::min(cfg.r1, cfg.r2);
    const auto grad_u = [&](const CartesianPoint& p) {
        const auto d = [&](CartesianPoint lo, CartesianPoint hi) {
            return (us.u_minus_h(hi) - us.u_minus_h(lo)) / (2.0 * h);
        };
        CartesianPoint g{
            d({p.x1 - h, p.x2, p.x3}, {p.x1 + h, p.x2, p.x3}),
            d({p.x1, p.x2 - h, p.x3}, {p.x1, p.x2 + h, p.x3}),
            d({p.x1, p.x2, p.x3 - h}, {p.x1, p.x2, p.x3 + h}),
        };
        g.x3 += e0; // grad H
        return g;
    };

    SuperfocusReport report;
    const double m = grid.boundary_margin;
    for (int i = 0; i <= grid.n_xi; ++i) {
        const double xi = -cfg.xi1 * (1.0 - m) +
                          (cfg.xi2 * (1.0 - m) + cfg.xi1 * (1.0 - m)) * i / grid.n_xi;
        for (int j = 1; j <= grid.n_theta; ++j) {
            const double theta = pi * j / grid.n_theta;
            const CartesianPoint p = geometry::to_cartesian({xi, theta, 0.0}, cfg);
            if (!geometry::in_exterior(p, cfg)) continue;
            const double g = geometry::norm(grad_u(p));
            if (region.contains_theta(theta)) {
                ++report.inside_count;
                if (g > report.inside_max) {
                    report.inside_max = g;
                    report.inside_argmax = p;
                    report.inside_argmax_theta = theta;
                }
            } else {
                ++report.outside_count;
                if (g > report.outside_max) {
                    report.outside_max = g;
                    report.outside_argmax = p;
                    report.outside_argmax_theta = theta;
                }
            }
        }
    }
    return report;
}

} // namespace bisphere::asymptotic
