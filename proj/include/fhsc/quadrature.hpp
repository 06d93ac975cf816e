#ifndef FHSC_QUADRATURE_HPP
#define FHSC_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fhsc {

/// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration on the
/// Legendre recurrence.
struct GaussRule {
    std::vector<double> x, w;
};

inline GaussRule gauss_legendre(int npts) {
    if (npts < 1) throw std::invalid_argument("gauss_legendre: npts must be >= 1");
    GaussRule r;
    r.x.resize(npts);
    r.w.resize(npts);
    const int m = (npts + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess
        double z = std::cos(M_PI * (i + 0.75) / (npts + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < npts; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = npts * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[npts - 1 - i] = z;
        r.w[i] = r.w[npts - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}

namespace detail {
inline const GaussRule& gl7() {
    static const GaussRule r = gauss_legendre(7);
    return r;
}
inline const GaussRule& gl15() {
    static const GaussRule r = gauss_legendre(15);
    return r;
}

inline double gl_panel(const std::function<double(double)>& f, double a, double b,
                       const GaussRule& r) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

inline double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                           double tol, double whole, int depth) {
    const double mid = 0.5 * (a + b);
    const double coarse = gl_panel(f, a, b, gl7());
    const double left = gl_panel(f, a, mid, gl15());
    const double right = gl_panel(f, mid, b, gl15());
    const double fine = left + right;
    (void)whole;
    if (depth <= 0) return fine;
    if (std::abs(fine - coarse) <= tol) return fine;
    return adaptive_rec(f, a, mid, 0.5 * tol, left, depth - 1) +
           adaptive_rec(f, mid, b, 0.5 * tol, right, depth - 1);
}
} // namespace detail

/// Adaptive quadrature: embedded 7/15-point Gauss pair with bisection.
/// tol is absolute on the whole interval.
inline double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                 double tol, int max_depth = 48) {
    if (!(b > a)) throw std::invalid_argument("integrate_adaptive: need b > a");
    // seed with a few panels so narrow peaks inside wide intervals are seen
    const int seed = 8;
    double total = 0;
    const double h = (b - a) / seed;
    for (int i = 0; i < seed; ++i) {
        const double x0 = a + i * h, x1 = (i + 1 == seed) ? b : x0 + h;
        total += detail::adaptive_rec(f, x0, x1, tol / seed, 0, max_depth);
    }
    return total;
}

/// Composite fixed-order Gauss-Legendre: `panels` equal panels of `order`
/// points each. The independent cross-check route for norms and overlaps.
inline double integrate_fixed_gauss(const std::function<double(double)>& f, double a, double b,
                                    int order, int panels) {
    if (!(b > a)) throw std::invalid_argument("integrate_fixed_gauss: need b > a");
    const GaussRule r = gauss_legendre(order);
    double total = 0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) total += detail::gl_panel(f, a + i * h, a + (i + 1) * h, r);
    return total;
}

} // namespace fhsc

#endif
