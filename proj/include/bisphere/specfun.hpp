#ifndef BISPHERE_SPECFUN_HPP
#define BISPHERE_SPECFUN_HPP

#include <vector>

namespace bisphere::specfun {

/// Euler-Mascheroni constant gamma.
double euler_gamma();

/// P_0(x) .. P_N(x) by upward three-term recurrence. Requires |x| <= 1.
std::vector<double> legendre_sequence(double x, int n_max);

/// Polygamma function psi_k(z) for z > 0, k >= 0.
///
/// Evaluation shifts z upward with psi_k(z) = psi_k(z+1) - (-1)^k k! z^{-k-1}
/// until z >= 12, then applies the Bernoulli asymptotic expansion.
double polygamma(int k, double z);

/// Riemann zeta at integer s >= 2. Tabulated for s <= 20, direct sum with
/// an Euler-Maclaurin tail above that.
double riemann_zeta_int(int s);

/// Streaming Legendre recurrence: next() yields P_0(x), P_1(x), P_2(x), ...
/// without storing the sequence. Used by the long boundary-series sums.
class LegendreStream {
public:
    explicit LegendreStream(double x) : x_(x) {}

    double next() {
        if (n_ == 0) { ++n_; return p_prev_; }
        if (n_ == 1) { p_curr_ = x_; ++n_; return p_curr_; }
        const double p_next =
            ((2.0 * (n_ - 1) + 1.0) * x_ * p_curr_ - (n_ - 1) * p_prev_) / static_cast<double>(n_);
        p_prev_ = p_curr_;
        p_curr_ = p_next;
        ++n_;
        return p_curr_;
    }

private:
    double x_;
    double p_prev_ = 1.0;
    double p_curr_ = 1.0;
    long n_ = 0;
};

} // namespace bisphere::specfun

#endif
