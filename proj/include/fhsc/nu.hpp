#ifndef FHSC_NU_HPP
#define FHSC_NU_HPP

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fhsc/constants.hpp"
#include "fhsc/potential.hpp"
#include "fhsc/spectrum.hpp"

namespace fhsc {

struct reduction_infeasible : std::domain_error {
    using std::domain_error::domain_error;
};
struct no_admissible_branch : std::domain_error {
    using std::domain_error::domain_error;
};

/// psi'' + (tau~/sigma) psi' + (sigma~/sigma^2) psi = 0 with polynomial
/// coefficients, index = power of s. Degree bounds: tau~ <= 1, sigma <= 2,
/// sigma~ <= 2 (higher coefficients identically zero by construction).
/// All NU arithmetic runs in long double; the pipeline is chains of exact
/// algebraic identities and double roundoff can flip feasibility decisions.
struct HypergeometricForm {
    std::array<long double, 2> tau_tilde{};
    std::array<long double, 3> sigma{};
    std::array<long double, 3> sigma_tilde{};
};

/// One (k, pi-sign) candidate of the NU reduction.
struct NUReduction {
    long double k = 0;
    std::array<long double, 2> pi_poly{};   // pi(s) = pi0 + pi1 s
    std::array<long double, 2> tau_poly{};  // tau(s) = tau0 + tau1 s
    long double lambda = 0;                 // k + pi'
    // lambda_n(n) = lambda_n_quad * n^2 + lambda_n_lin * n
    long double lambda_n_quad = 0;
    long double lambda_n_lin = 0;
    bool k_plus = false;   // which root of the k quadratic
    bool pi_plus = false;  // sign in front of the square root
    bool admissible = false;  // tau' < 0

    long double lambda_n(int n) const {
        return lambda_n_quad * (long double)n * n + lambda_n_lin * n;
    }
};

namespace detail {

inline void fill_candidate(NUReduction& c, const HypergeometricForm& f, long double k,
                           long double p1, long double p0, bool k_plus, bool pi_plus) {
    const long double u1 = (2.0L * f.sigma[2] - f.tau_tilde[1]) / 2.0L;
    const long double u0 = (f.sigma[1] - f.tau_tilde[0]) / 2.0L;
    c.k = k;
    c.pi_poly = {u0 + p0, u1 + p1};
    c.tau_poly = {f.tau_tilde[0] + 2.0L * c.pi_poly[0], f.tau_tilde[1] + 2.0L * c.pi_poly[1]};
    c.lambda = k + c.pi_poly[1];
    // lambda_n = -n tau' - n(n-1) sigma''/2
    c.lambda_n_quad = -f.sigma[2];
    c.lambda_n_lin = -c.tau_poly[1] + f.sigma[2];
    c.k_plus = k_plus;
    c.pi_plus = pi_plus;
    c.admissible = c.tau_poly[1] < 0;
}

} // namespace detail

/// All four (k, pi) candidates with admissibility verdicts, unfiltered.
/// Candidates whose square root cannot be a real first-degree polynomial
/// are dropped (the discriminant-zero condition alone does not guarantee
/// the quadratic under the root is a nonnegative perfect square).
inline std::vector<NUReduction> reduce_all(const HypergeometricForm& f) {
    const long double u1 = (2.0L * f.sigma[2] - f.tau_tilde[1]) / 2.0L;
    const long double u0 = (f.sigma[1] - f.tau_tilde[0]) / 2.0L;
    // R(s) = u(s)^2 - sigma~(s) + k sigma(s) = a s^2 + b s + c, linear in k
    // a = u1^2 - sigma~2 + k sigma2, b = 2 u0 u1 - sigma~1 + k sigma1,
    // c = u0^2 - sigma~0 + k sigma0.
    const long double a0 = u1 * u1 - f.sigma_tilde[2];
    const long double b0 = 2.0L * u0 * u1 - f.sigma_tilde[1];
    const long double c0 = u0 * u0 - f.sigma_tilde[0];
    // zero discriminant of R in s:  b(k)^2 - 4 a(k) c(k) = 0, quadratic in k
    const long double Ak = f.sigma[1] * f.sigma[1] - 4.0L * f.sigma[2] * f.sigma[0];
    const long double Bk = 2.0L * f.sigma[1] * b0 - 4.0L * (f.sigma[2] * c0 + f.sigma[0] * a0);
    const long double Ck = b0 * b0 - 4.0L * a0 * c0;

    std::vector<std::pair<long double, bool>> kroots;  // (k, is_plus_root)
    const long double scale = fabsl(Ak) + fabsl(Bk) + fabsl(Ck);
    if (fabsl(Ak) <= 1e-14L * scale) {
        if (fabsl(Bk) > 1e-14L * scale) kroots.push_back({-Ck / Bk, false});
    } else {
        const long double disc = Bk * Bk - 4.0L * Ak * Ck;
        // clamp rounding noise from the Bk^2 / 4AkCk cancellation to the
        // double k root instead of declaring false infeasibility
        const long double dtol = 64.0L * std::numeric_limits<long double>::epsilon() *
                                 (Bk * Bk + fabsl(4.0L * Ak * Ck));
        if (disc >= 0) {
            const long double sq = sqrtl(disc);
            kroots.push_back({(-Bk + sq) / (2.0L * Ak), true});
            kroots.push_back({(-Bk - sq) / (2.0L * Ak), false});
        } else if (disc > -dtol) {
            kroots.push_back({-Bk / (2.0L * Ak), false});
        }
    }

    std::vector<NUReduction> out;
    for (auto [k, kplus] : kroots) {
        const long double a = a0 + k * f.sigma[2];
        const long double b = b0 + k * f.sigma[1];
        const long double c = c0 + k * f.sigma[0];
        // R must be a perfect square of a real polynomial p1 s + p0
        long double p1, p0;
        const long double rscale = fabsl(a) + fabsl(b) + fabsl(c);
        if (fabsl(a) <= 1e-12L * rscale) {
            if (fabsl(b) > 1e-12L * rscale || c < 0) continue;  // not a square
            p1 = 0;
            p0 = sqrtl(c);
        } else if (a > 0) {
            p1 = sqrtl(a);
            p0 = b / (2.0L * p1);
        } else {
            continue;  // R <= 0, pi would be imaginary
        }
        for (int sign : {+1, -1}) {
            NUReduction cand;
            detail::fill_candidate(cand, f, k, sign * p1, sign * p0, kplus, sign > 0);
            out.push_back(cand);
        }
    }
    return out;
}

/// Admissible reductions (tau' < 0). Throws when the k quadratic has no
/// usable root or when every branch fails admissibility.
inline std::vector<NUReduction> reduce(const HypergeometricForm& f) {
    std::vector<NUReduction> all = reduce_all(f);
    if (all.empty())
        throw reduction_infeasible("reduce: no real first-degree pi exists for this form");
    std::vector<NUReduction> out;
    for (const auto& c : all)
        if (c.admissible) out.push_back(c);
    if (out.empty()) throw no_admissible_branch("reduce: every branch has tau' >= 0");
    return out;
}

/// Weight exponents (p, r) with rho = s^p (1-s)^r solving (sigma rho)' = tau rho.
/// The identity (tau - sigma') s (1-s) == sigma (p (1-s) - r s) must hold as
/// polynomials; forms outside that class are rejected.
inline std::pair<long double, long double> weight_function(const NUReduction& red,
                                                           const HypergeometricForm& f) {
    // lhs(s) = (tau - sigma') * s(1-s), degree <= 3
    const long double d0 = red.tau_poly[0] - f.sigma[1];
    const long double d1 = red.tau_poly[1] - 2.0L * f.sigma[2];
    const long double lhs[4] = {0.0L, d0, d1 - d0, -d1};
    // rhs(s) = sigma(s) * (p - (p+r) s); two unknowns x = p, y = p+r give
    // rhs coefficients c0 = x s0, c1 = x s1 - y s0, c2 = x s2 - y s1, c3 = -y s2
    const long double s0 = f.sigma[0], s1 = f.sigma[1], s2 = f.sigma[2];
    // Solve the least-degenerate pair of equations, then verify all four.
    long double x = 0, y = 0;
    bool solved = false;
    const long double eps = 1e-12L;
    const long double smax = fabsl(s0) + fabsl(s1) + fabsl(s2);
    if (fabsl(s0) > eps * smax) {
        x = lhs[0] / s0;
        y = (x * s1 - lhs[1]) / s0;
        solved = true;
    } else if (fabsl(s1) > eps * smax) {
        x = lhs[1] / s1;  // c0 forces nothing; c1 = x s1
        if (fabsl(s2) > eps * smax)
            y = -lhs[3] / s2;
        else
            y = (x * s2 - lhs[2]) / s1;
        solved = true;
    } else if (fabsl(s2) > eps * smax) {
        y = -lhs[3] / s2;
        x = (lhs[2] + y * s1) / s2;
        solved = true;
    }
    if (!solved) throw std::domain_error("weight_function: sigma is identically zero");
    const long double rhs[4] = {x * s0, x * s1 - y * s0, x * s2 - y * s1, -y * s2};
    long double lscale = 1.0L;
    for (int i = 0; i < 4; ++i) lscale = std::max(lscale, fabsl(lhs[i]));
    for (int i = 0; i < 4; ++i)
        if (fabsl(lhs[i] - rhs[i]) > 1e-10L * lscale)
            throw std::domain_error(
                "weight_function: form outside the s^p (1-s)^r representable class");
    return {x, y - x};  // p, r
}

/// Exact power-basis expansion of (1/rho) d^n/ds^n [sigma^n rho] for the
/// sigma = sigma1 s(1-s), rho = s^p (1-s)^r class, via the Leibniz rule.
/// Proportional to P_n^(p, r)(1 - 2s). Degree cap keeps the falling
/// factorials well inside long double range.
inline std::vector<long double> rodrigues_polynomial(const NUReduction& red,
                                                     const HypergeometricForm& f, int n) {
    if (n < 0 || n > 8)
        throw std::invalid_argument("rodrigues_polynomial: degree cap is n <= 8");
    const long double s0 = f.sigma[0], s1 = f.sigma[1], s2 = f.sigma[2];
    const long double smax = fabsl(s1) + fabsl(s2) + fabsl(s0);
    if (fabsl(s0) > 1e-12L * smax || fabsl(s1 + s2) > 1e-12L * smax)
        throw std::domain_error("rodrigues_polynomial: sigma must be proportional to s(1-s)");
    auto [p, r] = weight_function(red, f);

    auto falling = [](long double a, int j) {
        long double v = 1.0L;
        for (int i = 0; i < j; ++i) v *= a - i;
        return v;
    };
    auto binom = [](int a, int b) {
        long double v = 1.0L;
        for (int i = 1; i <= b; ++i) v = v * (a - b + i) / i;
        return v;
    };
    // d^n/ds^n [s^(n+p) (1-s)^(n+r)] expanded over j, then (1-s)^j binomially
    std::vector<long double> coef(n + 1, 0.0L);
    for (int j = 0; j <= n; ++j) {
        const long double term = binom(n, j) * falling(n + p, j) * falling(n + r, n - j) *
                                 ((n - j) % 2 ? -1.0L : 1.0L);
        // term * s^(n-j) * (1-s)^j
        for (int m = 0; m <= j; ++m)
            coef[n - j + m] += term * binom(j, m) * (m % 2 ? -1.0L : 1.0L);
    }
    long double sig_n = 1.0L;
    for (int i = 0; i < n; ++i) sig_n *= s1;
    for (auto& c : coef) c *= sig_n;
    return coef;
}

/// The hypergeometric-type form of the combined potential at a given momentum
/// candidate: tau~ = 1 - s, sigma = s(1-s),
/// sigma~ = -eps1^2 - eps3 s + eps2 s^2.
inline HypergeometricForm combined_potential_form(const PotentialParams& p, double mu_amu,
                                                  const PhysicalConstants& k, double cPn) {
    const long double w = 2.0L * (long double)mu_amu * k.amu_energy /
                          ((long double)k.hbar_c * k.hbar_c);
    const long double a = p.alpha;
    const long double beta = w / (a * a);
    const long double eps1_sq = beta * ((long double)p.D - p.B * a + (long double)p.q * p.C * a * a -
                                        (long double)cPn);
    const long double eps2 = beta * ((long double)p.A * a - p.D + (long double)cPn);
    const long double eps3 = beta * ((long double)p.B * a + p.A * a - 2.0L * p.D +
                                     2.0L * (long double)cPn);
    HypergeometricForm f;
    f.tau_tilde = {1.0L, -1.0L};
    f.sigma = {0.0L, 1.0L, -1.0L};
    f.sigma_tilde = {-eps1_sq, -eps3, eps2};
    return f;
}

/// The physical branch: admissible, integrable weight, and bound-state
/// asymptotics. phi = s^(pi0/sigma1) (1-s)^(-(pi0+pi1)/sigma1) must vanish
/// at both ends, which prunes branches the tau' < 0 rule alone lets through
/// (for eps1 < 1/Q - 1/2 a k_plus branch is admissible and integrable but
/// grows like s^(-eps1)).
inline NUReduction physical_branch(const HypergeometricForm& f) {
    std::vector<NUReduction> adm = reduce(f);
    const NUReduction* pick = nullptr;
    bool duplicate = false;
    const long double s1 = f.sigma[1];
    for (const auto& c : adm) {
        bool ok;
        try {
            auto [p, r] = weight_function(c, f);
            ok = p > -1.0L && r > -1.0L;
        } catch (const std::domain_error&) {
            ok = false;
        }
        if (s1 != 0)
            ok = ok && c.pi_poly[0] / s1 > 0 && (c.pi_poly[0] + c.pi_poly[1]) / s1 < 0;
        if (ok) {
            if (pick)
                duplicate = true;
            else
                pick = &c;
        }
    }
    if (duplicate) throw std::domain_error("physical_branch: branch not unique");
    if (!pick) throw no_admissible_branch("physical_branch: no integrable admissible branch");
    return *pick;
}

/// Recover the momentum eigenvalue from the generic reduction by solving
/// lambda(cP) = lambda_n(cP) for cP below the continuum offset. Bisection:
/// the difference is monotone through eps1.
inline double nu_momentum_roundtrip(int n, const PotentialParams& p, double mu_amu,
                                    const PhysicalConstants& k) {
    const double w = two_mu_over_hbarc2(mu_amu, k);
    const double a = p.alpha;
    // continuum threshold in long double: the upper bracket must stay
    // strictly below it after narrowing, or eps1^2 goes negative
    const long double offset_ld = (long double)p.D - (long double)p.B * (long double)a +
                                  (long double)p.q * p.C * (long double)a * a;
    const double offset = (double)offset_ld;
    auto gap = [&](double cP) {
        HypergeometricForm f = combined_potential_form(p, mu_amu, k, cP);
        NUReduction red = physical_branch(f);
        return (double)(red.lambda - red.lambda_n(n));
    };
    // gap = M - 2 eps1 (n + 1/Q): -inf for deep cP (large eps1), and for a
    // bound level n it is positive as cP -> offset (eps1 -> 0)
    const double lump = p.B - p.A - 2.0 * p.q * p.C * a;
    const double eps1_big = (w / a) * std::abs(lump) + 10.0 * (n + 1);
    double lo = offset - a * a * eps1_big * eps1_big / w;
    double hi = (double)(offset_ld - 1e-13L * (fabsl(offset_ld) + 1.0L));
    double glo = gap(lo), ghi = gap(hi);
    if (glo == 0) return lo;
    if ((glo < 0) == (ghi < 0))
        throw std::domain_error("nu_momentum_roundtrip: root not bracketed");
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = gap(mid);
        if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-16 * (std::abs(lo) + std::abs(hi)) + 1e-300) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace fhsc

#endif
