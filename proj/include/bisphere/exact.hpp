#ifndef BISPHERE_EXACT_HPP
#define BISPHERE_EXACT_HPP

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "bisphere/common.hpp"
#include "bisphere/field.hpp"
#include "bisphere/geometry.hpp"
#include "bisphere/quadrature.hpp"

namespace bisphere::exact {

using geometry::BisphericalPoint;
using geometry::CartesianPoint;
using geometry::SphereConfig;

inline constexpr long default_term_cap = 10'000'000;

/// U(c) = sum_n exp((2n+1)c) / (exp((2n+1)(xi1+xi2)) - 1), 0 <= c < xi1+xi2.
SumResult capacitance_U(double c, const SphereConfig& cfg, double tol = 1e-14,
                        long term_cap = default_term_cap);

/// T(c) = sum_n (2n+1)(exp((2n+1)c) + 1) / (exp((2n+1)(xi1+xi2)) - 1), 0 <= c < xi1+xi2.
SumResult t_sum(double c, const SphereConfig& cfg, double tol = 1e-14,
                long term_cap = default_term_cap);

/// Boundary potentials (C1, C2) of the singular function h; C1 < 0 < C2.
std::pair<double, double> boundary_constants(const SphereConfig& cfg, double tol = 1e-14);

/// Separated-variables solution of the unit-flux problem:
/// h = sqrt(2) sqrt(cosh xi - cos theta) sum_n (A_n e^{(n+1/2)xi} + B_n e^{-(n+1/2)xi}) P_n(cos theta).
/// Coefficients are never formed alone; every term pairs A_n, B_n with the
/// evaluation exponentials in a single overflow-free expression.
class HSeries {
public:
    HSeries(const SphereConfig& cfg, long n_max, double tol = 1e-8);

    const SphereConfig& config() const { return cfg_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    long n_max() const { return n_max_; }
    double tol() const { return tol_; }

    /// Literal A_n, B_n (test/introspection use; overflows once (2n+1) xi1
    /// exceeds ~700, which the evaluation path never does).
    double coefficient_a(long n) const;
    double coefficient_b(long n) const;

    SeriesEval eval_bispherical(double xi, double theta) const;
    SeriesEval eval_with_stats(const CartesianPoint& p) const;
    double eval(const CartesianPoint& p) const { return eval_with_stats(p).value; }

    /// d h / d xi at fixed (xi, theta).
    SeriesEval d_xi(double xi, double theta) const;
    /// Outward normal derivative on the boundary of sphere j as a function of theta.
    SeriesEval normal_derivative(int j, double theta) const;
    SeriesEval normal_derivative_b1(double theta) const { return normal_derivative(1, theta); }

private:
    SphereConfig cfg_;
    double c1_ = 0.0;
    double c2_ = 0.0;
    long n_max_ = 0;
    double tol_ = 1e-8;
};

HSeries h_series(const SphereConfig& cfg, long n_max, double tol = 1e-8);
double h_eval(const HSeries& hs, const CartesianPoint& p);
double h_normal_derivative_b1(const SphereConfig& cfg, double theta, long n_max);

/// Image-charge expansion of h: four families of point charges at the
/// multiply reflected centers, weighted by the boundary constants.
class ImageChargeSet {
public:
    struct Family {
        double weight = 0.0;               // +-C1 or +-C2
        geometry::ReflectionTag tag{};     // which xi offset generates xi_m
        bool mirrored = false;             // true: located at -p_m^c
        std::vector<geometry::ImagePole> poles;
    };

    ImageChargeSet(const SphereConfig& cfg, int m_max);

    const SphereConfig& config() const { return cfg_; }
    int m_max() const { return m_max_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    const std::array<Family, 4>& families() const { return families_; }

    /// Largest ratio |q_{m+1}|/|q_m| across families (absolute-convergence margin).
    double charge_decay_ratio() const;
    /// Net charge inside sphere j of the truncated expansion; tends to (-1)^{j+1}.
    double enclosed_charge(int j) const;

private:
    SphereConfig cfg_;
    int m_max_ = 0;
    double c1_ = 0.0;
    double c2_ = 0.0;
    std::array<Family, 4> families_;
};

ImageChargeSet image_charges(const SphereConfig& cfg, int m_max);
double h_via_images(const ImageChargeSet& ics, const CartesianPoint& p);

/// Concentration factor C_H^eps by the image-charge sums; the field's
/// constant term is ignored (it cancels in the exact limit).
SumResult concentration_factor_eps(const SphereConfig& cfg, const AxialField& field,
                                   double tol = 1e-10, long term_cap = default_term_cap);

/// Exterior solution for the uniform background field E0 x3:
/// u - H = sqrt(2) E0 sqrt(cosh xi - cos theta) sum_n (C_n e^{(n+1/2)xi} + D_n e^{-(n+1/2)xi}) P_n.
/// V1, V2 solve the zero-flux conditions; u = E0 V_j on the boundary of sphere j.
class UniformSolution {
public:
    UniformSolution(const SphereConfig& cfg, double e0, long n_max, double tol = 1e-8);

    const SphereConfig& config() const { return cfg_; }
    double e0() const { return e0_; }
    double v1() const { return v1_; }
    double v2() const { return v2_; }
    long n_max() const { return n_max_; }
    /// Boundary potential of u on sphere j (= E0 V_j).
    double boundary_potential(int j) const { return e0_ * (j == 1 ? v1_ : v2_); }

    double coefficient_c(long n) const;
    double coefficient_d(long n) const;

    SeriesEval u_minus_h_bispherical(double xi, double theta) const;
    SeriesEval u_minus_h_with_stats(const CartesianPoint& p) const;
    double u_minus_h(const CartesianPoint& p) const { return u_minus_h_with_stats(p).value; }

    SeriesEval d_xi(double xi, double theta) const;
    SeriesEval normal_derivative(int j, double theta) const;
    SeriesEval normal_derivative_b1(double theta) const { return normal_derivative(1, theta); }

private:
    SphereConfig cfg_;
    double e0_ = 0.0;
    double v1_ = 0.0;
    double v2_ = 0.0;
    long n_max_ = 0;
    double tol_ = 1e-8;
};

UniformSolution uniform_solution(const SphereConfig& cfg, double e0, long n_max);
double u_minus_h_eval(const UniformSolution& us, const CartesianPoint& p);
double u_normal_derivative_b1(const UniformSolution& us, double theta);

/// Surface flux of a field with the given outward normal derivative profile
/// over the boundary of sphere j (axisymmetric integrand; the azimuthal
/// factor 2 pi is analytic).
QuadResult flux_quadrature(const SphereConfig& cfg,
                           const std::function<double(double)>& normal_derivative,
                           int j, int quad_order);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
};

/// Checks u|B1 - u|B2 = integral of H d_nu h over both boundaries for a
/// uniform field; the two sides are computed by independent routes.
IdentityCheck potential_difference_identity_check(const SphereConfig& cfg, const AxialField& field,
                                                  long n_max, int quad_order);

} // namespace bisphere::exact

#endif
