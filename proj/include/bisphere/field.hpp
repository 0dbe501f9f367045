#ifndef BISPHERE_FIELD_HPP
#define BISPHERE_FIELD_HPP

#include <vector>

#include "bisphere/geometry.hpp"

namespace bisphere::exact {

/// Axisymmetric entire harmonic background field, represented by its values
/// on the symmetry axis: H(t e3) = h0 + sum_k b_k t^k. Off-axis values are
/// the unique axisymmetric harmonic extension H(x) = h0 + sum_k b_k r^k P_k(x3/r).
/// The uniform field E0 x3 is b = {E0}.
class AxialField {
public:
    AxialField() = default;
    AxialField(double h0, std::vector<double> b);

    static AxialField uniform(double e0);

    double constant_term() const { return h0_; }
    /// b_1..b_K; b()[k-1] multiplies t^k on the axis.
    const std::vector<double>& b() const { return b_; }
    int degree() const { return static_cast<int>(b_.size()); }
    bool is_zero() const;
    /// Degree <= 1 (covers the zero field and E0 x3).
    bool is_uniform() const;

    double axis_value(double t) const;
    /// order-th derivative of t -> H(t e3).
    double axis_derivative(double t, int order) const;

    double value(const geometry::CartesianPoint& p) const;
    geometry::CartesianPoint gradient(const geometry::CartesianPoint& p) const;

private:
    double h0_ = 0.0;
    std::vector<double> b_;
};

} // namespace bisphere::exact

#endif
