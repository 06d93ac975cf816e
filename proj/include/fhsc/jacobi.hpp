#ifndef FHSC_JACOBI_HPP
#define FHSC_JACOBI_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace fhsc {

/// Jacobi polynomial P_n^(a,b)(x) by the standard three-term recurrence.
/// Exact for polynomials, no quadrature involved. The recurrence follows
/// the dominant solution, so it is forward-stable for the a, b > -1 range.
template <class Real>
inline Real jacobi_t(int n, Real a, Real b, Real x) {
    if (n < 0) throw std::invalid_argument("jacobi: degree n must be >= 0 (got " + std::to_string(n) + ")");
    if (!(a > Real(-1))) throw std::invalid_argument("jacobi: parameter a must be > -1 (got " + std::to_string((double)a) + ")");
    if (!(b > Real(-1))) throw std::invalid_argument("jacobi: parameter b must be > -1 (got " + std::to_string((double)b) + ")");

    if (n == 0) return Real(1);
    const Real apb = a + b;
    Real pm1 = Real(1);
    Real p = Real(0.5) * ((apb + 2) * x + (a - b));
    for (int m = 2; m <= n; ++m) {
        const Real c1 = 2 * m * (m + apb) * (2 * m + apb - 2);
        const Real c2 = (2 * m + apb - 1) * (a * a - b * b);
        const Real c3 = (2 * m + apb - 2) * (2 * m + apb - 1) * (2 * m + apb);
        const Real c4 = 2 * (m + a - 1) * (m + b - 1) * (2 * m + apb);
        const Real next = ((c2 + c3 * x) * p - c4 * pm1) / c1;
        pm1 = std::exchange(p, next);
    }
    return p;
}

inline double jacobi(int n, double a, double b, double x) { return jacobi_t<double>(n, a, b, x); }

} // namespace fhsc

#endif
