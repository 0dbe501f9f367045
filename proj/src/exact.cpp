#include "bisphere/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bisphere/specfun.hpp"

namespace bisphere::exact {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double sqrt2 = std::numbers::sqrt2;

double expm1_denom(double bn_s) {
    // 1 - e^{-bn s}, accurate for small bn s
    return -std::expm1(-bn_s);
}

// Adaptive sum whose terms eventually decay geometrically with the given
// per-term ratio. Requires two consecutive sub-tolerance tail estimates
// before stopping (a single term may sit near a sign change of the summand).
struct GeometricSum {
    double ratio;      // asymptotic |t_{n+1}/t_n|
    double tol;
    long cap;
    const char* what;

    template <typename TermFn>
    SumResult run(TermFn term) const {
        SumResult res;
        double sum = 0.0;
        int hits = 0;
        for (long n = 0;; ++n) {
            if (n >= cap)
                throw convergence_error(std::string(what) + ": term cap exceeded", n,
                                        res.tail_bound);
            const double t = term(n);
            sum += t;
            if (n >= 4) {
                const double tail = std::fabs(t) * ratio / (1.0 - ratio);
                res.tail_bound = tail;
                hits = (tail < tol * std::max(1.0, std::fabs(sum))) ? hits + 1 : 0;
                if (hits >= 2) {
                    res.value = sum;
                    res.terms = n + 1;
                    return res;
                }
            }
        }
    }
};

// Raw Legendre sums shared by the h and uniform-field series:
//   S0 = sum_n (A_n + B_n) P_n(cos theta)
//   S1 = sum_n (n + 1/2)(A_n - B_n) P_n(cos theta)
// with
//   A_n = ((p0 + q0 a bn) E(y0) + (p1 + q1 a bn) E(y1)) / (1 - E(s))
//   B_n = ((p2 + q2 a bn) E(y2) + (p3 + q3 a bn) E(y3)) / (1 - E(s))
// where bn = 2n+1, E(y) = exp(-bn y), y0 = xi2 - xi/2, y1 = s - xi/2,
// y2 = xi1 + xi/2, y3 = s + xi/2. All exponents stay negative throughout the
// exterior region, so nothing overflows however large n gets.
struct RawSums {
    double s0 = 0.0;
    double s1 = 0.0;
    long terms = 0;
    double tail_bound = 0.0;
    bool converged = false;
};

struct SeriesCoeffs {
    std::array<double, 4> p{};
    std::array<double, 4> q{};
};

RawSums two_exp_sums(const SphereConfig& cfg, const SeriesCoeffs& co, double xi, double theta,
                     long n_max, double tol) {
    const double s = cfg.xi_sum();
    const std::array<double, 4> y = {cfg.xi2 - 0.5 * xi, s - 0.5 * xi, cfg.xi1 + 0.5 * xi,
                                     s + 0.5 * xi};
    const double y_min = *std::min_element(y.begin(), y.end());
    if (!(y_min > 0.0))
        throw std::domain_error("series evaluation: point lies too deep inside a sphere");
    const double ratio = std::exp(-2.0 * y_min);

    specfun::LegendreStream leg(std::cos(theta));
    RawSums out;
    double env = 0.0;
    for (long n = 0; n < n_max; ++n) {
        const double bn = 2.0 * n + 1.0;
        const double denom = expm1_denom(bn * s);
        const double abn = cfg.a * bn;
        std::array<double, 4> e{};
        for (int i = 0; i < 4; ++i) e[i] = std::exp(-bn * y[i]);
        const double a_part = ((co.p[0] + co.q[0] * abn) * e[0] + (co.p[1] + co.q[1] * abn) * e[1]) / denom;
        const double b_part = ((co.p[2] + co.q[2] * abn) * e[2] + (co.p[3] + co.q[3] * abn) * e[3]) / denom;
        const double pn = leg.next();
        out.s0 += (a_part + b_part) * pn;
        out.s1 += (n + 0.5) * (a_part - b_part) * pn;
        out.terms = n + 1;

        env = 0.0;
        for (int i = 0; i < 4; ++i)
            env += (std::fabs(co.p[i]) + std::fabs(co.q[i]) * abn) * e[i];
        env *= (n + 0.5) + 1.0;
        env /= denom;
        if (n >= 16) {
            // Tail of sum (m/n)^2-growth envelopes under a geometric ratio.
            const double nn = n + 0.5;
            const double g = 1.0 - ratio;
            const double tail = env * ratio / g * (1.0 + 2.0 / (nn * g) + 2.0 / (nn * nn * g * g));
            out.tail_bound = tail;
            const double scale = std::max({1.0, std::fabs(out.s0), std::fabs(out.s1)});
            if (tail < tol * scale) {
                out.converged = true;
                return out;
            }
        }
    }
    out.converged = false;
    return out;
}

SeriesEval assemble_value(const RawSums& raw, double xi, double theta, double scale) {
    const double w = std::sqrt(std::cosh(xi) - std::cos(theta));
    return {scale * sqrt2 * w * raw.s0, raw.terms, raw.tail_bound, raw.converged};
}

SeriesEval assemble_d_xi(const RawSums& raw, double xi, double theta, double scale) {
    const double w2 = std::cosh(xi) - std::cos(theta);
    const double w = std::sqrt(w2);
    const double v = sqrt2 * (0.5 * std::sinh(xi) / w * raw.s0 + w * raw.s1);
    return {scale * v, raw.terms, raw.tail_bound, raw.converged};
}

SeriesEval assemble_normal_derivative(const SphereConfig& cfg, const RawSums& raw, int j,
                                      double theta, double scale) {
    // nu = (-1)^{j+1} e_xi; d_nu = (-1)^{j+1} (1/sigma_xi) d/dxi at xi = (-1)^j xi_j.
    const double xi = (j == 1) ? -cfg.xi1 : cfg.xi2;
    const double sign = (j == 1) ? 1.0 : -1.0;
    const double w2 = std::cosh(xi) - std::cos(theta);
    const SeriesEval dxi = assemble_d_xi(raw, xi, theta, scale);
    return {sign * w2 / cfg.a * dxi.value, raw.terms, raw.tail_bound, raw.converged};
}

double check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= pi)) throw std::domain_error("theta must lie in [0, pi]");
    return theta;
}

} // namespace

SumResult capacitance_U(double c, const SphereConfig& cfg, double tol, long term_cap) {
    const double s = cfg.xi_sum();
    if (!(c >= 0.0) || !(c < s))
        throw std::domain_error("capacitance_U: requires 0 <= c < xi1 + xi2 (series diverges at c = xi1 + xi2)");
    GeometricSum gs{std::exp(-2.0 * (s - c)), tol, term_cap, "capacitance_U"};
    return gs.run([&](long n) {
        const double bn = 2.0 * n + 1.0;
        return std::exp(-bn * (s - c)) / expm1_denom(bn * s);
    });
}

SumResult t_sum(double c, const SphereConfig& cfg, double tol, long term_cap) {
    const double s = cfg.xi_sum();
    if (!(c >= 0.0) || !(c < s)) throw std::domain_error("t_sum: requires 0 <= c < xi1 + xi2");
    GeometricSum gs{std::exp(-2.0 * (s - c)), tol, term_cap, "t_sum"};
    return gs.run([&](long n) {
        const double bn = 2.0 * n + 1.0;
        return bn * (std::exp(-bn * (s - c)) + std::exp(-bn * s)) / expm1_denom(bn * s);
    });
}

std::pair<double, double> boundary_constants(const SphereConfig& cfg, double tol) {
    const double u1 = capacitance_U(cfg.xi1, cfg, tol).value;
    const double u2 = capacitance_U(cfg.xi2, cfg, tol).value;
    const double u0 = capacitance_U(0.0, cfg, tol).value;
    const double det = u1 * u2 - u0 * u0;
    if (det == 0.0) throw std::runtime_error("boundary_constants: singular capacitance system");
    const double f = 1.0 / (8.0 * pi * cfg.a * det);
    return {-f * (u1 - u0), f * (u2 - u0)};
}

HSeries::HSeries(const SphereConfig& cfg, long n_max, double tol) : cfg_(cfg), n_max_(n_max), tol_(tol) {
    if (n_max < 1) throw std::domain_error("HSeries: truncation order must be >= 1");
    auto [c1, c2] = boundary_constants(cfg, std::min(tol, 1e-13));
    c1_ = c1;
    c2_ = c2;
}

double HSeries::coefficient_a(long n) const {
    const double bn = 2.0 * n + 1.0;
    return (c2_ * std::exp(bn * cfg_.xi1) - c1_) / std::expm1(bn * cfg_.xi_sum());
}

double HSeries::coefficient_b(long n) const {
    const double bn = 2.0 * n + 1.0;
    return (c1_ * std::exp(bn * cfg_.xi2) - c2_) / std::expm1(bn * cfg_.xi_sum());
}

namespace {
SeriesCoeffs h_coeffs(double c1, double c2) {
    SeriesCoeffs co;
    co.p = {c2, -c1, c1, -c2};
    co.q = {0.0, 0.0, 0.0, 0.0};
    return co;
}
} // namespace

SeriesEval HSeries::eval_bispherical(double xi, double theta) const {
    const RawSums raw = two_exp_sums(cfg_, h_coeffs(c1_, c2_), xi, check_theta(theta), n_max_, tol_);
    return assemble_value(raw, xi, theta, 1.0);
}

SeriesEval HSeries::eval_with_stats(const CartesianPoint& p) const {
    const auto b = geometry::to_bispherical(p, cfg_);
    return eval_bispherical(b.xi, b.theta);
}

SeriesEval HSeries::d_xi(double xi, double theta) const {
    const RawSums raw = two_exp_sums(cfg_, h_coeffs(c1_, c2_), xi, check_theta(theta), n_max_, tol_);
    return assemble_d_xi(raw, xi, theta, 1.0);
}

SeriesEval HSeries::normal_derivative(int j, double theta) const {
    if (j != 1 && j != 2) throw std::invalid_argument("normal_derivative: sphere index must be 1 or 2");
    const double xi = (j == 1) ? -cfg_.xi1 : cfg_.xi2;
    const RawSums raw = two_exp_sums(cfg_, h_coeffs(c1_, c2_), xi, check_theta(theta), n_max_, tol_);
    return assemble_normal_derivative(cfg_, raw, j, theta, 1.0);
}

HSeries h_series(const SphereConfig& cfg, long n_max, double tol) { return {cfg, n_max, tol}; }

double h_eval(const HSeries& hs, const CartesianPoint& p) { return hs.eval(p); }

double h_normal_derivative_b1(const SphereConfig& cfg, double theta, long n_max) {
    return HSeries(cfg, n_max).normal_derivative_b1(theta).value;
}

ImageChargeSet::ImageChargeSet(const SphereConfig& cfg, int m_max) : cfg_(cfg), m_max_(m_max) {
    if (m_max < 1) throw std::domain_error("ImageChargeSet: m_max must be >= 1");
    auto [c1, c2] = boundary_constants(cfg);
    c1_ = c1;
    c2_ = c2;
    using geometry::ReflectionTag;
    families_[0] = {c1_, ReflectionTag::xi1_plus_xi2, false, {}};
    families_[1] = {-c1_, ReflectionTag::xi1, true, {}};
    families_[2] = {-c2_, ReflectionTag::xi2, false, {}};
    families_[3] = {c2_, ReflectionTag::xi1_plus_xi2, true, {}};
    for (auto& fam : families_) {
        fam.poles.reserve(m_max);
        for (int m = 0; m < m_max; ++m) {
            geometry::ImagePole pole = geometry::reflected_center(m, fam.tag, cfg);
            if (fam.mirrored) pole.location = {-1.0 * pole.location.x1, -1.0 * pole.location.x2,
                                               -pole.location.x3};
            fam.poles.push_back(pole);
        }
    }
}

double ImageChargeSet::charge_decay_ratio() const {
    double worst = 0.0;
    for (const auto& fam : families_)
        for (std::size_t m = 1; m < fam.poles.size(); ++m)
            worst = std::max(worst, fam.poles[m].charge / fam.poles[m - 1].charge);
    return worst;
}

double ImageChargeSet::enclosed_charge(int j) const {
    // Charges at negative x3 lie inside B1, positive inside B2.
    double total = 0.0;
    for (const auto& fam : families_)
        for (const auto& pole : fam.poles)
            if ((j == 1) == (pole.location.x3 < 0.0)) total += fam.weight * pole.charge;
    return total;
}

ImageChargeSet image_charges(const SphereConfig& cfg, int m_max) { return {cfg, m_max}; }

double h_via_images(const ImageChargeSet& ics, const CartesianPoint& p) {
    double value = 0.0;
    for (const auto& fam : ics.families()) {
        double fam_sum = 0.0;
        for (const auto& pole : fam.poles) {
            const double dist = geometry::norm(p - pole.location);
            if (dist == 0.0) throw std::domain_error("h_via_images: point coincides with an image charge");
            fam_sum += pole.charge * (-1.0 / (4.0 * pi * dist));
        }
        value += fam.weight * fam_sum;
    }
    return value;
}

SumResult concentration_factor_eps(const SphereConfig& cfg, const AxialField& field, double tol,
                                   long term_cap) {
    if (field.is_zero()) return {0.0, 0, 0.0};
    auto [c1, c2] = boundary_constants(cfg);
    const double s = cfg.xi_sum();
    // H is evaluated without its constant term: the constant cancels exactly
    // in the full sums (the image charges carry zero net charge) and keeping
    // it would only slow truncation.
    const auto g = [&](double z) { return field.axis_value(z) - field.constant_term(); };
    const auto axis_sum = [&](double c, double location_sign) {
        GeometricSum gs{std::exp(-s), tol, term_cap, "concentration_factor_eps"};
        return gs.run([&](long m) {
            const double xim = m * s + c;
            const double q = 4.0 * pi * cfg.a / std::sinh(xim);
            return q * g(location_sign * cfg.a / std::tanh(xim));
        });
    };
    // C1/(C1-C2) [sum q^{s} H(p^{s}) - sum q^{xi1} H(-p^{xi1})]
    //   - C2/(C1-C2) [sum q^{xi2} H(p^{xi2}) - sum q^{s} H(-p^{s})]
    const SumResult a1 = axis_sum(s, +1.0);
    const SumResult a2 = axis_sum(cfg.xi1, -1.0);
    const SumResult b1 = axis_sum(cfg.xi2, +1.0);
    const SumResult b2 = axis_sum(s, -1.0);
    SumResult out;
    out.value = (c1 * (a1.value - a2.value) - c2 * (b1.value - b2.value)) / (c1 - c2);
    out.terms = std::max({a1.terms, a2.terms, b1.terms, b2.terms});
    const double wmax = std::max(std::fabs(c1), std::fabs(c2)) / std::fabs(c1 - c2);
    out.tail_bound =
        wmax * (a1.tail_bound + a2.tail_bound + b1.tail_bound + b2.tail_bound);
    return out;
}

UniformSolution::UniformSolution(const SphereConfig& cfg, double e0, long n_max, double tol)
    : cfg_(cfg), e0_(e0), n_max_(n_max), tol_(tol) {
    if (n_max < 1) throw std::domain_error("UniformSolution: truncation order must be >= 1");
    const double fine_tol = std::min(tol, 1e-13);
    const double u1 = capacitance_U(cfg.xi1, cfg, fine_tol).value;
    const double u2 = capacitance_U(cfg.xi2, cfg, fine_tol).value;
    const double u0 = capacitance_U(0.0, cfg, fine_tol).value;
    const double t1 = t_sum(cfg.xi1, cfg, fine_tol).value;
    const double t2 = t_sum(cfg.xi2, cfg, fine_tol).value;
    const double det = u1 * u2 - u0 * u0;
    if (det == 0.0) throw std::runtime_error("uniform_solution: singular capacitance system");
    v1_ = -cfg.a * (t2 * u1 - t1 * u0) / det;
    v2_ = cfg.a * (t1 * u2 - t2 * u0) / det;
}

double UniformSolution::coefficient_c(long n) const {
    const double bn = 2.0 * n + 1.0;
    const double e1 = std::exp(bn * cfg_.xi1);
    return (e1 * v2_ - v1_ - cfg_.a * bn * (e1 + 1.0)) / std::expm1(bn * cfg_.xi_sum());
}

double UniformSolution::coefficient_d(long n) const {
    const double bn = 2.0 * n + 1.0;
    const double e2 = std::exp(bn * cfg_.xi2);
    return (e2 * v1_ - v2_ + cfg_.a * bn * (e2 + 1.0)) / std::expm1(bn * cfg_.xi_sum());
}

namespace {
SeriesCoeffs u_coeffs(double v1, double v2) {
    SeriesCoeffs co;
    co.p = {v2, -v1, v1, -v2};
    co.q = {-1.0, -1.0, 1.0, 1.0};
    return co;
}
} // namespace

SeriesEval UniformSolution::u_minus_h_bispherical(double xi, double theta) const {
    const RawSums raw = two_exp_sums(cfg_, u_coeffs(v1_, v2_), xi, check_theta(theta), n_max_, tol_);
    return assemble_value(raw, xi, theta, e0_);
}

SeriesEval UniformSolution::u_minus_h_with_stats(const CartesianPoint& p) const {
    const auto b = geometry::to_bispherical(p, cfg_);
    return u_minus_h_bispherical(b.xi, b.theta);
}

SeriesEval UniformSolution::d_xi(double xi, double theta) const {
    const RawSums raw = two_exp_sums(cfg_, u_coeffs(v1_, v2_), xi, check_theta(theta), n_max_, tol_);
    return assemble_d_xi(raw, xi, theta, e0_);
}

SeriesEval UniformSolution::normal_derivative(int j, double theta) const {
    if (j != 1 && j != 2) throw std::invalid_argument("normal_derivative: sphere index must be 1 or 2");
    const double xi = (j == 1) ? -cfg_.xi1 : cfg_.xi2;
    const RawSums raw = two_exp_sums(cfg_, u_coeffs(v1_, v2_), xi, check_theta(theta), n_max_, tol_);
    return assemble_normal_derivative(cfg_, raw, j, theta, e0_);
}

UniformSolution uniform_solution(const SphereConfig& cfg, double e0, long n_max) {
    return {cfg, e0, n_max};
}

double u_minus_h_eval(const UniformSolution& us, const CartesianPoint& p) { return us.u_minus_h(p); }

double u_normal_derivative_b1(const UniformSolution& us, double theta) {
    return us.normal_derivative_b1(theta).value;
}

QuadResult flux_quadrature(const SphereConfig& cfg,
                           const std::function<double(double)>& normal_derivative, int j,
                           int quad_order) {
    if (j != 1 && j != 2) throw std::invalid_argument("flux_quadrature: sphere index must be 1 or 2");
    const double xij = (j == 1) ? cfg.xi1 : cfg.xi2;
    const auto integrand = [&](double theta) {
        const double denom = std::cosh(xij) - std::cos(theta);
        const double sigma_theta = cfg.a / denom;
        const double sigma_phi = sigma_theta * std::sin(theta);
        return normal_derivative(theta) * sigma_theta * sigma_phi;
    };
    QuadResult res = integrate(integrand, 0.0, pi, quad_order);
    res.value *= 2.0 * pi;
    res.error_estimate *= 2.0 * pi;
    return res;
}

IdentityCheck potential_difference_identity_check(const SphereConfig& cfg, const AxialField& field,
                                                  long n_max, int quad_order) {
    if (!field.is_uniform())
        throw std::domain_error(
            "potential_difference_identity_check: only uniform fields have an exact solution");
    const double e0 = field.is_zero() ? 0.0 : field.b()[0];

    // Left side: boundary values of u extracted from the series solution.
    IdentityCheck out;
    if (e0 == 0.0) {
        out.lhs = 0.0;
    } else {
        const UniformSolution us(cfg, e0, n_max);
        const auto boundary_value = [&](int j) {
            const double xi = (j == 1) ? -cfg.xi1 : cfg.xi2;
            const auto p = geometry::to_cartesian({xi, pi / 2.0, 0.0}, cfg);
            return us.u_minus_h_bispherical(xi, pi / 2.0).value + field.value(p);
        };
        out.lhs = boundary_value(1) - boundary_value(2);
    }

    // Right side: quadrature of H d_nu h over both boundaries.
    const HSeries hs(cfg, n_max);
    double rhs = 0.0;
    for (int j = 1; j <= 2; ++j) {
        const double xi = (j == 1) ? -cfg.xi1 : cfg.xi2;
        const auto integrand = [&](double theta) {
            const auto p = geometry::to_cartesian({xi, theta, 0.0}, cfg);
            return field.value(p) * hs.normal_derivative(j, theta).value;
        };
        rhs += flux_quadrature(cfg, integrand, j, quad_order).value;
    }
    out.rhs = rhs;
    out.residual = std::fabs(out.lhs - out.rhs);
    return out;
}

} // namespace bisphere::exact
