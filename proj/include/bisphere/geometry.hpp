#ifndef BISPHERE_GEOMETRY_HPP
#define BISPHERE_GEOMETRY_HPP

#include <cmath>

namespace bisphere::geometry {

struct CartesianPoint {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
};

inline CartesianPoint operator+(const CartesianPoint& a, const CartesianPoint& b) {
    return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
}
inline CartesianPoint operator-(const CartesianPoint& a, const CartesianPoint& b) {
    return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
}
inline CartesianPoint operator*(double s, const CartesianPoint& p) {
    return {s * p.x1, s * p.x2, s * p.x3};
}
inline double dot(const CartesianPoint& a, const CartesianPoint& b) {
    return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
}
inline double norm_sq(const CartesianPoint& p) { return dot(p, p); }
inline double norm(const CartesianPoint& p) { return std::sqrt(norm_sq(p)); }

/// Bispherical coordinates (xi, theta, phi) with poles at (0,0,-a) and (0,0,+a).
/// theta in [0, pi], phi in [0, 2 pi). The exterior of the two spheres is
/// -xi1 <= xi <= xi2.
struct BisphericalPoint {
    double xi = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

/// Two axis-aligned spheres B1 (lower, center c1 < 0) and B2 (upper) with
/// surface gap eps, plus every derived constant of the coordinate system.
/// Immutable after make_config.
struct SphereConfig {
    double r1 = 0.0;
    double r2 = 0.0;
    double eps = 0.0;

    double c1 = 0.0;       // center of B1 on the x3-axis
    double c2 = 0.0;       // center of B2; c2 - c1 = r1 + r2 + eps
    double a = 0.0;        // pole parameter a_eps
    double xi1 = 0.0;      // B1 = {xi = -xi1}
    double xi2 = 0.0;      // B2 = {xi = +xi2}
    double r_tilde = 0.0;  // r1 r2 / (r1 + r2)
    double r_tilde_1 = 0.0;
    double r_tilde_2 = 0.0;
    bool tight_gap = false; // eps below 1e-12: a_eps still representable, coth values degrade

    CartesianPoint center(int j) const { return {0.0, 0.0, j == 1 ? c1 : c2}; }
    CartesianPoint pole(int j) const { return {0.0, 0.0, j == 1 ? -a : a}; }
    double radius(int j) const { return j == 1 ? r1 : r2; }
    double xi_sum() const { return xi1 + xi2; }
};

SphereConfig make_config(double r1, double r2, double eps);

BisphericalPoint to_bispherical(const CartesianPoint& p, const SphereConfig& cfg);
CartesianPoint to_cartesian(const BisphericalPoint& b, const SphereConfig& cfg);

struct ScaleFactors {
    double xi = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};
ScaleFactors scale_factors(const BisphericalPoint& b, const SphereConfig& cfg);

/// N(x) = (x - p1)/|x - p1|^2 - (x - p2)/|x - p2|^2, the vector field whose
/// normalization is the xi coordinate direction.
CartesianPoint pole_difference_field(const CartesianPoint& p, const SphereConfig& cfg);

/// Unit coordinate vector e_xi at p (unit norm up to roundoff).
CartesianPoint unit_xi_vector(const CartesianPoint& p, const SphereConfig& cfg);

/// Inversion of p across the boundary of sphere j.
CartesianPoint reflect(int j, const CartesianPoint& p, const SphereConfig& cfg);

enum class ReflectionTag { xi1, xi2, xi1_plus_xi2 };

struct ImagePole {
    double xi = 0.0;          // xi_m^c = m (xi1 + xi2) + c
    double charge = 0.0;      // q_m^c = 4 pi a / sinh(xi_m^c)
    CartesianPoint location;  // p_m^c = a coth(xi_m^c) e3
};

/// m-th multiply reflected center for c = xi1, xi2 or xi1+xi2.
ImagePole reflected_center(int m, ReflectionTag tag, const SphereConfig& cfg);

/// Gap region where the gradient blow-up concentrates: the solid of
/// revolution bounded by the theta = theta_eps coordinate torus,
/// equivalently {theta > theta_eps} in bispherical coordinates.
struct SuperfocusRegion {
    double theta_eps = 0.0; // sqrt(eps |ln eps|)
    double d_star = 0.0;    // a / sin(theta_eps)
    double r_star = 0.0;    // a cot(theta_eps)
    double a = 0.0;

    bool contains_theta(double theta) const { return theta > theta_eps; }
    /// Torus membership test; the bounding circle in the (rho, x3) half-plane
    /// has center distance a*cot(theta_eps) and radius a/sin(theta_eps).
    bool contains(const CartesianPoint& p) const {
        const double rho = std::hypot(p.x1, p.x2);
        const double dc = rho - r_star;
        return dc * dc + p.x3 * p.x3 < d_star * d_star;
    }
};
SuperfocusRegion superfocus_region(const SphereConfig& cfg);

/// True when p lies strictly outside both closed balls.
bool in_exterior(const CartesianPoint& p, const SphereConfig& cfg);

} // namespace bisphere::geometry

#endif
