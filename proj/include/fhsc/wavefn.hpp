#ifndef FHSC_WAVEFN_HPP
#define FHSC_WAVEFN_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "fhsc/constants.hpp"
#include "fhsc/jacobi.hpp"
#include "fhsc/potential.hpp"
#include "fhsc/quadrature.hpp"
#include "fhsc/spectrum.hpp"

namespace fhsc {

/// Bound-state eigenfunction
///   psi_n(t) = Bn e^(-alpha eps1 t) (1 - e^(-alpha t))^(1/Q)
///              P_n^(2 eps1, 2/Q - 1)(1 - 2 e^(-alpha t)).
/// Bn is kept in log domain: under the spatial-eV convention eps1 reaches
/// ~2e5 and Bn itself overflows a double (ln Bn ~ +1500).
struct WavefunctionSpec {
    int n = 0;
    double eps1 = 0;
    double invQ = 0;
    double alpha = 0;
    double log_bn = 0;  // authoritative; Bn() may overflow to inf

    // provenance, checked by overlap()
    PotentialParams params{};
    double mu = 0;
    PhysicalConstants consts{};

    double jacobi_a() const { return 2.0 * eps1; }
    double jacobi_b() const { return 2.0 * invQ - 1.0; }
    double Bn() const { return std::exp(log_bn); }

    bool same_provenance(const WavefunctionSpec& o) const {
        return params.A == o.params.A && params.B == o.params.B && params.C == o.params.C &&
               params.D == o.params.D && params.q == o.params.q &&
               params.alpha == o.params.alpha && mu == o.mu &&
               consts.hbar_c == o.consts.hbar_c && consts.amu_energy == o.consts.amu_energy &&
               consts.e2 == o.consts.e2;
    }
};

/// Unnormalized spec from a spectrum level. Rejects flagged states.
inline WavefunctionSpec wavefunction_spec(const SpectrumResult& res, const PotentialParams& p,
                                          double mu_amu, const PhysicalConstants& k) {
    if (!res.normalizable)
        throw std::invalid_argument("wavefunction_spec: level n=" + std::to_string(res.n) +
                                    " is not normalizable (eps1 <= 0)");
    WavefunctionSpec s;
    s.n = res.n;
    s.eps1 = res.eps1;
    s.invQ = res.invQ;
    s.alpha = p.alpha;
    s.log_bn = 0.0;
    s.params = p;
    s.mu = mu_amu;
    s.consts = k;
    if (!(s.jacobi_a() > 0) || !(s.jacobi_b() > -1))
        throw std::invalid_argument("wavefunction_spec: Jacobi weight not integrable");
    return s;
}

/// The modified-Kratzer eigenfunction retains alpha even though the
/// potential limit sets it to zero; alpha stays an explicit regularization
/// input here.
inline WavefunctionSpec kratzer_wavefunction_spec(const Molecule& m, int n, double alpha,
                                                  const PhysicalConstants& k) {
    PotentialParams p = kratzer_params(m, alpha);
    SpectrumResult r = momentum_eigenvalue(n, p, m.mu, k);
    return wavefunction_spec(r, p, m.mu, k);
}

namespace detail {

/// log |psi(t)| without the Bn factor; sign returned separately.
inline double log_psi_unnorm(const WavefunctionSpec& s, double t, int& sign) {
    const double one_minus_u = -std::expm1(-s.alpha * t);  // 1 - e^(-alpha t)
    if (!(one_minus_u > 0)) {  // t == 0
        sign = 0;
        return -std::numeric_limits<double>::infinity();
    }
    const double poly = jacobi(s.n, s.jacobi_a(), s.jacobi_b(), 1.0 - 2.0 * std::exp(-s.alpha * t));
    sign = (poly > 0) - (poly < 0);
    return -s.alpha * s.eps1 * t + s.invQ * std::log(one_minus_u) +
           (poly == 0 ? -std::numeric_limits<double>::infinity() : std::log(std::abs(poly)));
}

/// Envelope (no polynomial factor) of log psi, and its analytic peak.
inline double log_envelope(const WavefunctionSpec& s, double t) {
    const double one_minus_u = -std::expm1(-s.alpha * t);
    if (!(one_minus_u > 0)) return -std::numeric_limits<double>::infinity();
    return -s.alpha * s.eps1 * t + s.invQ * std::log(one_minus_u);
}

inline double envelope_peak_t(const WavefunctionSpec& s) {
    return std::log1p(s.invQ / s.eps1) / s.alpha;
}

/// Bisect outward from the envelope peak for the point where the envelope
/// has dropped by `drop` (in log units). dir = +1 marches right, -1 left.
inline double envelope_drop_point(const WavefunctionSpec& s, double drop, int dir) {
    const double tp = envelope_peak_t(s);
    const double target = log_envelope(s, tp) - drop;
    double lo = tp, hi;
    if (dir > 0) {
        double step = 1.0 / (s.alpha * s.eps1) * (s.invQ + drop);
        hi = tp + step;
        while (log_envelope(s, hi) > target) hi = tp + (hi - tp) * 2.0;
    } else {
        hi = tp * 0.5;
        while (log_envelope(s, hi) > target && hi > tp * 1e-9) hi *= 0.5;
        if (log_envelope(s, hi) > target) return 0.0;  // never drops before t=0
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (log_envelope(s, mid) > target)
            lo = mid;
        else
            hi = mid;
        if (std::abs(hi - lo) < 1e-13 * (1.0 + std::abs(hi))) break;
    }
    return dir > 0 ? hi : lo;
}

} // namespace detail

inline double psi(double t, const WavefunctionSpec& s) {
    if (t < 0) throw std::domain_error("psi: t must be >= 0");
    if (t == 0) return 0.0;
    int sign = 0;
    const double L = detail::log_psi_unnorm(s, t, sign);
    return sign * std::exp(s.log_bn + L);
}

/// [t_lo, t_hi] outside which |psi| is below e^(-drop) of its envelope peak.
/// The padding term covers the spread of the degree-n polynomial factor.
inline std::pair<double, double> support_window(const WavefunctionSpec& s, double drop = 45.0) {
    const double d = drop + 6.0 * s.n;
    double lo = detail::envelope_drop_point(s, d, -1);
    double hi = detail::envelope_drop_point(s, d, +1);
    return {lo, hi};
}

namespace detail {

/// Norm integral of the unnormalized psi via the u = e^(-alpha t)
/// substitution:  I = (1/alpha) Int_0^1 u^(2 eps1 - 1) (1-u)^(2 invQ) P^2 du.
/// A further u = v^kp substitution regularizes the u->0 endpoint when
/// eps1 < 1/2. Returns log(I). Adaptive route.
inline double log_norm_integral_adaptive(const WavefunctionSpec& s) {
    const double a2 = 2.0 * s.eps1 - 1.0;
    const int kp = a2 > 0.2 ? 1 : (int)std::ceil(1.2 / s.eps1);
    // integration window in u from the envelope drop in t
    const double d = 90.0 + 14.0 * s.n;
    const double t_hi = envelope_drop_point(s, d, +1);
    const double t_lo = envelope_drop_point(s, d, -1);
    const double u_lo = std::exp(-s.alpha * t_hi);
    const double u_hi = t_lo > 0 ? std::exp(-s.alpha * t_lo) : 1.0;
    const double v_lo = kp == 1 ? u_lo : std::pow(u_lo, 1.0 / kp);
    const double v_hi = kp == 1 ? u_hi : std::pow(u_hi, 1.0 / kp);

    // offset by the log-integrand maximum over a scan
    auto log_integrand = [&](double v) {
        const double u = kp == 1 ? v : std::pow(v, kp);
        if (!(u > 0) || !(u < 1)) return -std::numeric_limits<double>::infinity();
        const double poly = jacobi(s.n, s.jacobi_a(), s.jacobi_b(), 1.0 - 2.0 * u);
        double g = (2.0 * s.eps1 * kp - 1.0) * std::log(v) +
                   2.0 * s.invQ * std::log1p(-u) - std::log(s.alpha) + std::log((double)kp);
        g += poly == 0 ? -std::numeric_limits<double>::infinity()
                       : 2.0 * std::log(std::abs(poly));
        return g;
    };
    double g0 = -std::numeric_limits<double>::infinity();
    const int nscan = 512;
    for (int i = 1; i < nscan; ++i) {
        const double v = v_lo + (v_hi - v_lo) * i / nscan;
        g0 = std::max(g0, log_integrand(v));
    }
    auto f = [&](double v) {
        const double g = log_integrand(v);
        return g > g0 - 700.0 ? std::exp(g - g0) : 0.0;
    };
    const double I = integrate_adaptive(f, v_lo, v_hi, 1e-12 * (v_hi - v_lo));
    return g0 + std::log(I);
}

/// Same integral by the unrelated route: composite fixed-order Gauss in t.
inline double log_norm_integral_fixed(const WavefunctionSpec& s) {
    const double d = 90.0 + 14.0 * s.n;
    double t_lo = envelope_drop_point(s, d, -1);
    double t_hi = envelope_drop_point(s, d, +1);
    // the t-integrand has an integrable (alpha t)^(2/Q) rise at 0; keep the
    // endpoint when the window reaches it
    double g0 = -std::numeric_limits<double>::infinity();
    const int nscan = 512;
    for (int i = 1; i < nscan; ++i) {
        int sg;
        const double t = t_lo + (t_hi - t_lo) * i / nscan;
        g0 = std::max(g0, 2.0 * log_psi_unnorm(s, t, sg));
    }
    auto f = [&](double t) {
        int sg;
        const double g = 2.0 * log_psi_unnorm(s, t, sg);
        return g > g0 - 700.0 ? std::exp(g - g0) : 0.0;
    };
    const double I = integrate_fixed_gauss(f, t_lo, t_hi, 40, 96);
    return g0 + std::log(I);
}

} // namespace detail

/// Fix Bn by unit L2 norm on (0, inf). Idempotent by construction: the
/// integral is computed on the unnormalized shape.
inline WavefunctionSpec normalize(const WavefunctionSpec& spec) {
    if (!(spec.eps1 > 0))
        throw std::invalid_argument("normalize: non-normalizable spec (eps1 <= 0)");
    WavefunctionSpec out = spec;
    out.log_bn = -0.5 * detail::log_norm_integral_adaptive(spec);
    return out;
}

/// Relative disagreement of the two quadrature routes on the norm integral.
inline double norm_scheme_disagreement(const WavefunctionSpec& spec) {
    const double la = detail::log_norm_integral_adaptive(spec);
    const double lf = detail::log_norm_integral_fixed(spec);
    return std::abs(std::expm1(lf - la));
}

/// Int psi_m psi_n dt for two normalized specs of the same potential.
inline double overlap(const WavefunctionSpec& m, const WavefunctionSpec& n) {
    if (!m.same_provenance(n))
        throw std::invalid_argument("overlap: specs built from different potentials");
    auto wm = support_window(m), wn = support_window(n);
    const double lo = std::min(wm.first, wn.first), hi = std::max(wm.second, wn.second);
    auto f = [&](double t) { return psi(t, m) * psi(t, n); };
    return integrate_adaptive(f, lo, hi, 1e-10);
}

/// Interior sign changes of psi_n, each confirmed by bisection.
inline int count_nodes(const WavefunctionSpec& spec) {
    auto w = support_window(spec, 40.0);
    const int nsamp = 1500 + 800 * spec.n;
    double prev_t = w.first, prev_v = psi(prev_t, spec);
    int nodes = 0;
    for (int i = 1; i <= nsamp; ++i) {
        const double t = w.first + (w.second - w.first) * i / nsamp;
        const double v = psi(t, spec);
        if (v == 0.0) continue;
        if (prev_v != 0.0 && ((prev_v < 0) != (v < 0))) {
            double a = prev_t, b = t;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = psi(mid, spec);
                if (fm == 0.0) break;
                if ((fm < 0) == (psi(a, spec) < 0))
                    a = mid;
                else
                    b = mid;
            }
            ++nodes;
        }
        prev_t = t;
        prev_v = v;
    }
    return nodes;
}

namespace detail {

/// Extended-precision, shifted psi sampler for the residual check. The
/// double path carries ~1e-14 relative noise (log pieces are O(100)) which
/// the 1/h^2 stencil amplifies above the 1e-6 residual contract.
inline long double psi_shifted_ld(const WavefunctionSpec& s, long double t, long double lshift) {
    const long double one_minus_u = -expm1l(-(long double)s.alpha * t);
    if (!(one_minus_u > 0)) return 0.0L;
    const long double poly = jacobi_t<long double>(
        s.n, 2.0L * (long double)s.eps1, 2.0L * (long double)s.invQ - 1.0L,
        1.0L - 2.0L * expl(-(long double)s.alpha * t));
    if (poly == 0) return 0.0L;
    const long double L = -(long double)s.alpha * s.eps1 * t +
                          (long double)s.invQ * logl(one_minus_u) - lshift;
    return (poly < 0 ? -1.0L : 1.0L) * expl(L + logl(fabsl(poly)));
}

} // namespace detail

/// ||H psi - c Pn psi||_2 / ||psi||_2 with the Greene-Aldrich Hamiltonian
/// applied by a second-order finite-difference stencil on n_points interior
/// nodes across the support window. Endpoint values come from psi itself,
/// so no boundary truncation enters. The ratio is normalization-invariant,
/// so the sampler runs unnormalized with a log shift.
inline double hamiltonian_residual(const WavefunctionSpec& spec, double Pn, int n_points) {
    auto w = support_window(spec, 40.0);
    const double t0 = std::max(w.first * 0.8, 1e-12);
    const double t1 = w.second * 1.1;
    const double h = (t1 - t0) / (n_points + 1);
    const double kappa = 1.0 / two_mu_over_hbarc2(spec.mu, spec.consts);
    const long double lshift =
        detail::log_envelope(spec, detail::envelope_peak_t(spec));
    std::vector<long double> v(n_points + 2);
    for (int i = 0; i < n_points + 2; ++i)
        v[i] = detail::psi_shifted_ld(spec, (long double)t0 + i * (long double)h, lshift);
    long double rr = 0, pp = 0;
    const long double h2 = (long double)h * h;
    for (int i = 1; i <= n_points; ++i) {
        const double t = t0 + i * h;
        const long double lap = (v[i + 1] - 2.0L * v[i] + v[i - 1]) / h2;
        const long double r =
            -kappa * lap +
            (long double)(greene_aldrich_potential(t, spec.params) - Pn) * v[i];
        rr += r * r;
        pp += v[i] * v[i];
    }
    return (double)sqrtl(rr / pp);
}

} // namespace fhsc

#endif
