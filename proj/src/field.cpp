#include "bisphere/field.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "bisphere/specfun.hpp"

namespace bisphere::exact {

using geometry::CartesianPoint;

AxialField::AxialField(double h0, std::vector<double> b) : h0_(h0), b_(std::move(b)) {
    for (double c : b_)
        if (!std::isfinite(c)) throw std::domain_error("AxialField: non-finite coefficient");
    while (!b_.empty() && b_.back() == 0.0) b_.pop_back();
}

AxialField AxialField::uniform(double e0) {
    if (e0 == 0.0) return {};
    return {0.0, {e0}};
}

bool AxialField::is_zero() const { return b_.empty(); }

bool AxialField::is_uniform() const { return b_.size() <= 1; }

double AxialField::axis_value(double t) const {
    double v = 0.0;
    for (std::size_t k = b_.size(); k > 0; --k) v = (v + b_[k - 1]) * t;
    return h0_ + v;
}

double AxialField::axis_derivative(double t, int order) const {
    if (order < 0) throw std::domain_error("axis_derivative: negative order");
    if (order == 0) return axis_value(t);
    double v = 0.0;
    for (int k = static_cast<int>(b_.size()); k >= order; --k) {
        double fac = 1.0;
        for (int i = 0; i < order; ++i) fac *= (k - i);
        v = v * t + fac * b_[static_cast<std::size_t>(k - 1)];
    }
    return v;
}

double AxialField::value(const CartesianPoint& p) const {
    if (b_.empty()) return h0_;
    const double r = geometry::norm(p);
    if (r == 0.0) return h0_;
    const double u = p.x3 / r;
    specfun::LegendreStream leg(u);
    leg.next(); // P_0
    double v = h0_;
    double rk = 1.0;
    for (std::size_t k = 1; k <= b_.size(); ++k) {
        rk *= r;
        v += b_[k - 1] * rk * leg.next();
    }
    return v;
}

CartesianPoint AxialField::gradient(const CartesianPoint& p) const {
    if (b_.empty()) return {};
    const double r = geometry::norm(p);
    const double rho2 = p.x1 * p.x1 + p.x2 * p.x2;
    // Near the axis, (P_k - u P_{k-1})/(1 - u^2) loses precision; switch to
    // the Taylor expansion of the axisymmetric harmonic around the axis.
    if (rho2 <= 1e-8 * r * r || r == 0.0) {
        const double z = p.x3;
        const double dz = axis_derivative(z, 1) - 0.25 * rho2 * axis_derivative(z, 3);
        const double dt = -0.5 * axis_derivative(z, 2) + rho2 / 16.0 * axis_derivative(z, 4);
        return {p.x1 * dt, p.x2 * dt, dz};
    }
    const double u = p.x3 / r;
    const auto leg = specfun::legendre_sequence(u, static_cast<int>(b_.size()));
    double dz = 0.0;
    double trans = 0.0; // sum_k b_k k r^k (P_k - u P_{k-1}), transverse part / (x_perp / rho^2)
    double rk = 1.0;    // r^{k-1}
    for (std::size_t k = 1; k <= b_.size(); ++k) {
        const double bk = b_[k - 1];
        dz += bk * k * rk * leg[k - 1];
        rk *= r;
        trans += bk * k * rk * (leg[k] - u * leg[k - 1]);
    }
    const double t = trans / rho2;
    return {p.x1 * t, p.x2 * t, dz};
}

} // namespace bisphere::exact
