#ifndef BISPHERE_ASYMPTOTIC_HPP
#define BISPHERE_ASYMPTOTIC_HPP

#include <vector>

#include "bisphere/common.hpp"
#include "bisphere/exact.hpp"
#include "bisphere/field.hpp"
#include "bisphere/geometry.hpp"

namespace bisphere::asymptotic {

using exact::AxialField;
using geometry::CartesianPoint;
using geometry::SphereConfig;

/// mu_eps and the radius weights mu_1 + mu_2 = 1.
struct MuConstants {
    double mu_eps = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
};

MuConstants mu_constants(const SphereConfig& cfg);

/// Q_k(r1, r2) = 4 pi rt^{k+1} [ (mu1 + (-1)^{k+1} mu2) zeta(k+1)
///                              + (mu1 psi_k(rt2) + (-1)^{k+1} mu2 psi_k(rt1)) / k! ].
double q_coefficient(int k, double r1, double r2);

/// Limit concentration factor C_H = sum_k b_k Q_k(r1, r2) (finite for
/// polynomial fields; mu_j and Q_k depend on the radii only).
double concentration_factor_limit(const AxialField& field, double r1, double r2);

/// C_H by the reflected-center double series; the m-sum is truncated and the
/// algebraic tail is completed by an Euler-Maclaurin correction. Cross-check
/// route for concentration_factor_limit; terms decay like m^-2.
SumResult c_h_double_series(const AxialField& field, double r1, double r2, double tol = 1e-9);

/// Blow-up amplitude psi(x) built from the four leading reflection centers.
double blowup_psi(const CartesianPoint& p, const SphereConfig& cfg);

/// Leading-order gradient C_H psi(x) N(x) + grad H(x). The bounded remainder
/// of the decomposition is dropped (no closed form exists for it).
CartesianPoint gradient_asymptotic(const CartesianPoint& p, const SphereConfig& cfg,
                                   const AxialField& field);

/// Normal blow-up profile on the boundary of sphere 1.
double q_boundary_b1(double theta, const SphereConfig& cfg);

/// Whole-exterior blow-up scalar q_h; restriction to {xi = -xi1} equals
/// q_boundary_b1.
double q_h_bispherical(double xi, double theta, const SphereConfig& cfg);
double q_h(const CartesianPoint& p, const SphereConfig& cfg);

/// Line-charge approximation of h: two axial segments carrying the densities
/// rho_1, rho_2 (piecewise, discontinuous at the second reflection centers).
/// The inverse-square-root endpoint factor is removed by the c = a cosh t
/// substitution; each piece is integrated by Gauss-Legendre at quad_order.
double singular_part_hs(const CartesianPoint& p, const SphereConfig& cfg, int quad_order = 64);

/// Total line charge of the rho_1 density (closed form; test hook).
double rho1_total_charge(const SphereConfig& cfg);

struct BlowupSummary {
    double c_h = 0.0;
    std::vector<double> q;  // Q_1..Q_K
    MuConstants mu;
    geometry::SuperfocusRegion region;
};
BlowupSummary blowup_summary(const SphereConfig& cfg, const AxialField& field, int k_max);

struct GridSpec {
    int n_xi = 48;
    int n_theta = 256; // must resolve theta_eps; coarse grids undersample the region boundary
    double boundary_margin = 0.02; // fraction of the xi range kept clear of each boundary
};

struct SuperfocusReport {
    double inside_max = 0.0;
    double outside_max = 0.0;
    CartesianPoint inside_argmax;
    CartesianPoint outside_argmax;
    double inside_argmax_theta = 0.0;
    double outside_argmax_theta = 0.0;
    long inside_count = 0;
    long outside_count = 0;
};

/// Scans |grad u| (finite differences of the exact uniform-field solution)
/// over a bispherical grid and reports the maxima inside and outside the
/// superfocusing region.
SuperfocusReport superfocus_bound_check(const SphereConfig& cfg, const AxialField& field,
                                        const GridSpec& grid = {});

} // namespace bisphere::asymptotic

#endif
