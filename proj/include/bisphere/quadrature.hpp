#ifndef BISPHERE_QUADRATURE_HPP
#define BISPHERE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace bisphere {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of the given order, computed by Newton iteration and cached.
const GaussLegendreRule& gauss_legendre(int order);

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Integrate f over [lo, hi] at the given order; the error estimate is the
/// difference against the doubled-order rule (whose value is returned).
QuadResult integrate(const std::function<double(double)>& f, double lo, double hi, int order);

} // namespace bisphere

#endif
