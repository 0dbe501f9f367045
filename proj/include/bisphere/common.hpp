#ifndef BISPHERE_COMMON_HPP
#define BISPHERE_COMMON_HPP

#include <stdexcept>
#include <string>

namespace bisphere {

inline constexpr const char* version = "1.0.0";

/// Thrown when an adaptive series or quadrature exceeds its term cap
/// without reaching the requested tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, long terms, double tail_bound)
        : std::runtime_error(what), terms_(terms), tail_bound_(tail_bound) {}
    long terms() const { return terms_; }
    double tail_bound() const { return tail_bound_; }

private:
    long terms_;
    double tail_bound_;
};

/// Result of an adaptively truncated sum.
struct SumResult {
    double value = 0.0;
    long terms = 0;
    double tail_bound = 0.0;
};

/// Result of a series evaluation that may stop at its truncation order
/// before the tail bound reaches the tolerance. `converged == false` is a
/// warning state, not an error; `tail_bound` carries the achieved bound.
struct SeriesEval {
    double value = 0.0;
    long terms = 0;
    double tail_bound = 0.0;
    bool converged = true;
};

} // namespace bisphere

#endif
