#include "bisphere/specfun.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace bisphere::specfun {

namespace {

// B_2, B_4, ..., B_16
constexpr std::array<double, 8> bernoulli_even = {
    1.0 / 6.0,   -1.0 / 30.0,    1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0,
};

constexpr double asymptotic_threshold = 12.0;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// psi_0(z) ~ ln z - 1/(2z) - sum_j B_2j / (2j z^2j), valid for large z.
double digamma_asymptotic(double z) {
    double result = std::log(z) - 0.5 / z;
    const double z2 = z * z;
    double zp = z2;
    for (std::size_t j = 0; j < bernoulli_even.size(); ++j) {
        result -= bernoulli_even[j] / (2.0 * (j + 1) * zp);
        zp *= z2;
    }
    return result;
}

// psi_k(z) ~ (-1)^{k-1} [ (k-1)!/z^k + k!/(2 z^{k+1})
//                         + sum_j B_2j (2j+k-1)! / ((2j)! z^{2j+k}) ], k >= 1.
double polygamma_asymptotic(int k, double z) {
    const double zk = std::pow(z, k);
    double result = factorial(k - 1) / zk + factorial(k) / (2.0 * zk * z);
    const double z2 = z * z;
    double zp = zk * z2;
    // (2j+k-1)!/(2j)! accumulated incrementally over j, starting at j=1
    double num = factorial(k + 1) / 2.0;
    for (std::size_t j = 0; j < bernoulli_even.size(); ++j) {
        result += bernoulli_even[j] * num / zp;
        zp *= z2;
        const int two_j = 2 * static_cast<int>(j + 1);
        num *= static_cast<double>(two_j + k + 1) / (two_j + 1);
        num *= static_cast<double>(two_j + k) / (two_j + 2);
    }
    return (k % 2 == 0 ? -1.0 : 1.0) * result; // (-1)^{k-1}
}

} // namespace

double euler_gamma() { return 0.5772156649015328606; }

std::vector<double> legendre_sequence(double x, int n_max) {
    if (!(std::fabs(x) <= 1.0)) throw std::domain_error("legendre_sequence: |x| > 1");
    if (n_max < 0) throw std::domain_error("legendre_sequence: negative order");
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1);
    p[0] = 1.0;
    if (n_max >= 1) p[1] = x;
    for (int n = 1; n < n_max; ++n)
        p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - n * p[n - 1]) / (n + 1.0);
    return p;
}

double polygamma(int k, double z) {
    if (k < 0) throw std::domain_error("polygamma: negative order");
    if (!(z > 0.0)) throw std::domain_error("polygamma: requires z > 0");
    // psi_k(z) = psi_k(z+1) - (-1)^k k! z^{-k-1}; shift until the asymptotic
    // expansion applies.
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double kfac = factorial(k);
    double shifted = 0.0;
    while (z < asymptotic_threshold) {
        shifted -= sign * kfac * std::pow(z, -(k + 1));
        z += 1.0;
    }
    const double head = (k == 0) ? digamma_asymptotic(z) : polygamma_asymptotic(k, z);
    return head + shifted;
}

double riemann_zeta_int(int s) {
    if (s < 2) throw std::domain_error("riemann_zeta_int: requires s >= 2");
    static const std::array<double, 19> table = {
        1.6449340668482264365, // zeta(2)
        1.2020569031595942854,
        1.0823232337111381916,
        1.0369277551433699263,
        1.0173430619844491397,
        1.0083492773819228268,
        1.0040773561979443394,
        1.0020083928260822144,
        1.0009945751278180853,
        1.0004941886041194646,
        1.0002460865533080483,
        1.0001227133475784891,
        1.0000612481350587048,
        1.0000305882363070205,
        1.0000152822594086519,
        1.0000076371976378998,
        1.0000038172932649998,
        1.0000019082127165539,
        1.0000009539620338728, // zeta(20)
    };
    if (s <= 20) return table[static_cast<std::size_t>(s - 2)];
    // Direct sum plus Euler-Maclaurin tail from N.
    const int n_direct = 10;
    double sum = 0.0;
    for (int n = 1; n < n_direct; ++n) sum += std::pow(n, -s);
    const double N = n_direct;
    const double f = std::pow(N, -s);
    sum += 0.5 * f + f * N / (s - 1.0) + s * f / (12.0 * N) -
           s * (s + 1.0) * (s + 2.0) * f / (720.0 * N * N * N);
    return sum;
}

} // namespace bisphere::specfun
