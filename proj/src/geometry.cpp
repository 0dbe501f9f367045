#include "bisphere/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bisphere::geometry {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

SphereConfig make_config(double r1, double r2, double eps) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw std::domain_error("make_config: radii must be positive");
    if (!(eps > 0.0)) throw std::domain_error("make_config: gap must be positive");
    SphereConfig cfg;
    cfg.r1 = r1;
    cfg.r2 = r2;
    cfg.eps = eps;
    const double d = r1 + r2 + eps; // center distance
    cfg.c1 = (r2 * r2 - r1 * r1 - d * d) / (2.0 * d);
    cfg.c2 = cfg.c1 + d;
    cfg.a = std::sqrt(eps) *
            std::sqrt((2.0 * r1 + eps) * (2.0 * r2 + eps) * (2.0 * r1 + 2.0 * r2 + eps)) /
            (2.0 * d);
    cfg.xi1 = std::asinh(cfg.a / r1);
    cfg.xi2 = std::asinh(cfg.a / r2);
    cfg.r_tilde = r1 * r2 / (r1 + r2);
    cfg.r_tilde_1 = r1 / (r1 + r2);
    cfg.r_tilde_2 = r2 / (r1 + r2);
    cfg.tight_gap = eps < 1e-12;
    return cfg;
}

BisphericalPoint to_bispherical(const CartesianPoint& p, const SphereConfig& cfg) {
    const double a = cfg.a;
    const double rho2 = p.x1 * p.x1 + p.x2 * p.x2;
    const double rho = std::sqrt(rho2);
    const double dp2 = rho2 + (p.x3 + a) * (p.x3 + a); // |p - p1|^2
    const double dm2 = rho2 + (p.x3 - a) * (p.x3 - a); // |p - p2|^2
    if (dp2 == 0.0 || dm2 == 0.0)
        throw std::domain_error("to_bispherical: point coincides with a coordinate pole");
    BisphericalPoint b;
    b.xi = 0.5 * std::log(dp2 / dm2);
    // principal branch of -arg((z+a)/(z-a)) with z = x3 + i rho; rho >= 0
    // keeps theta in [0, pi].
    b.theta = std::atan2(2.0 * a * rho, p.x3 * p.x3 + rho2 - a * a);
    b.phi = (rho == 0.0) ? 0.0 : std::atan2(p.x2, p.x1);
    if (b.phi < 0.0) b.phi += two_pi;
    return b;
}

CartesianPoint to_cartesian(const BisphericalPoint& b, const SphereConfig& cfg) {
    const double denom = std::cosh(b.xi) - std::cos(b.theta);
    if (denom == 0.0)
        throw std::domain_error("to_cartesian: (xi, theta) = (0, 0) is the point at infinity");
    const double s = cfg.a / denom;
    return {s * std::sin(b.theta) * std::cos(b.phi), s * std::sin(b.theta) * std::sin(b.phi),
            s * std::sinh(b.xi)};
}

ScaleFactors scale_factors(const BisphericalPoint& b, const SphereConfig& cfg) {
    const double denom = std::cosh(b.xi) - std::cos(b.theta);
    if (denom == 0.0) throw std::domain_error("scale_factors: singular at (xi, theta) = (0, 0)");
    ScaleFactors sf;
    sf.xi = cfg.a / denom;
    sf.theta = sf.xi;
    sf.phi = sf.xi * std::sin(b.theta);
    return sf;
}

CartesianPoint pole_difference_field(const CartesianPoint& p, const SphereConfig& cfg) {
    const CartesianPoint d1 = p - cfg.pole(1);
    const CartesianPoint d2 = p - cfg.pole(2);
    const double n1 = norm_sq(d1);
    const double n2 = norm_sq(d2);
    if (n1 == 0.0 || n2 == 0.0)
        throw std::domain_error("pole_difference_field: singular at a coordinate pole");
    return (1.0 / n1) * d1 - (1.0 / n2) * d2;
}

CartesianPoint unit_xi_vector(const CartesianPoint& p, const SphereConfig& cfg) {
    // sigma_xi = |p - p1| |p - p2| / (2a) in closed form, so sigma_xi * N has
    // unit norm identically.
    const double d1 = norm(p - cfg.pole(1));
    const double d2 = norm(p - cfg.pole(2));
    if (d1 == 0.0 || d2 == 0.0)
        throw std::domain_error("unit_xi_vector: singular at a coordinate pole");
    const double sigma_xi = d1 * d2 / (2.0 * cfg.a);
    return sigma_xi * pole_difference_field(p, cfg);
}

CartesianPoint reflect(int j, const CartesianPoint& p, const SphereConfig& cfg) {
    if (j != 1 && j != 2) throw std::invalid_argument("reflect: sphere index must be 1 or 2");
    const CartesianPoint c = cfg.center(j);
    const CartesianPoint d = p - c;
    const double n2 = norm_sq(d);
    if (n2 == 0.0) throw std::domain_error("reflect: singular at the sphere center");
    const double r = cfg.radius(j);
    return (r * r / n2) * d + c;
}

ImagePole reflected_center(int m, ReflectionTag tag, const SphereConfig& cfg) {
    if (m < 0) throw std::domain_error("reflected_center: m must be nonnegative");
    double c = 0.0;
    switch (tag) {
        case ReflectionTag::xi1: c = cfg.xi1; break;
        case ReflectionTag::xi2: c = cfg.xi2; break;
        case ReflectionTag::xi1_plus_xi2: c = cfg.xi1 + cfg.xi2; break;
    }
    ImagePole pole;
    pole.xi = m * (cfg.xi1 + cfg.xi2) + c;
    pole.charge = 4.0 * std::numbers::pi * cfg.a / std::sinh(pole.xi);
    pole.location = {0.0, 0.0, cfg.a / std::tanh(pole.xi)};
    return pole;
}

SuperfocusRegion superfocus_region(const SphereConfig& cfg) {
    if (!(cfg.eps < 1.0 / std::numbers::e))
        throw std::domain_error("superfocus_region: requires eps < 1/e");
    SuperfocusRegion region;
    region.theta_eps = std::sqrt(cfg.eps * std::fabs(std::log(cfg.eps)));
    if (!(region.theta_eps < std::numbers::pi / 2.0))
        throw std::domain_error("superfocus_region: theta_eps >= pi/2");
    region.d_star = cfg.a / std::sin(region.theta_eps);
    region.r_star = cfg.a / std::tan(region.theta_eps);
    region.a = cfg.a;
    return region;
}

bool in_exterior(const CartesianPoint& p, const SphereConfig& cfg) {
    return norm(p - cfg.center(1)) > cfg.r1 && norm(p - cfg.center(2)) > cfg.r2;
}

} // namespace bisphere::geometry
