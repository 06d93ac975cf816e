#ifndef FHSC_ORACLE_HPP
#define FHSC_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhsc/constants.hpp"
#include "fhsc/potential.hpp"
#include "fhsc/spectrum.hpp"

namespace fhsc {

struct refinement_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform grid on [t_min, t_max]; `points` counts intervals, the interior
/// Dirichlet unknowns sit at t_min + i*h, i = 1..points-1.
struct GridSpec {
    double t_min = 0;
    double t_max = 0;
    int points = 0;

    void validate() const {
        if (!(t_min < t_max)) throw std::invalid_argument("GridSpec: need t_min < t_max");
        if (points < 64) throw std::invalid_argument("GridSpec: need points >= 64");
    }
    double h() const { return (t_max - t_min) / points; }
};

struct OracleResult {
    std::vector<double> eigenvalues;        // c Pn candidates, strictly increasing
    GridSpec grid;
    bool extrapolated = false;
    std::vector<double> refinement_shift;   // |fine - coarse|/(1+|E|), set by extrapolation
};

namespace detail {

/// Eigenvalues of the symmetric tridiagonal (diag d, off-diagonal e) below x,
/// by the Sturm-sequence LDL^T pivot count. The first pivot carries no
/// off-diagonal correction.
inline int sturm_count_below(const std::vector<double>& d, double e2, double x) {
    int count = 0;
    const double pivmin = 1e-280;
    double q = d[0] - x;
    if (q < 0) ++count;
    for (size_t i = 1; i < d.size(); ++i) {
        if (std::abs(q) < pivmin) q = q < 0 ? -pivmin : pivmin;
        q = d[i] - x - e2 / q;
        if (q < 0) ++count;
    }
    return count;
}

/// k lowest eigenvalues by bisection on the Sturm count. Deterministic.
inline std::vector<double> lowest_eigenvalues(const std::vector<double>& d, double e, int k) {
    const double e2 = e * e;
    double lo = d[0], hi = d[0];
    for (double di : d) {
        lo = std::min(lo, di);
        hi = std::max(hi, di);
    }
    lo -= 2.0 * std::abs(e) + 1.0;  // Gershgorin
    hi += 2.0 * std::abs(e) + 1.0;
    std::vector<double> out(k);
    for (int j = 1; j <= k; ++j) {
        double a = lo, b = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (sturm_count_below(d, e2, mid) >= j)
                b = mid;
            else
                a = mid;
            if (b - a <= 1e-15 * (std::abs(a) + std::abs(b)) + 1e-305) break;
        }
        out[j - 1] = 0.5 * (a + b);
        lo = a;  // eigenvalue j+1 is not below this
    }
    return out;
}

} // namespace detail

/// k lowest eigenvalues of  -(hbar c)^2/(2 mu c^2) d^2/dt^2 + V(t)  with
/// Dirichlet walls, by second-order central differences and Sturm bisection.
inline OracleResult solve_bvp(const std::function<double(double)>& potential,
                              const PhysicalConstants& consts, double mu_amu,
                              const GridSpec& grid, int k) {
    grid.validate();
    if (k < 1) throw std::invalid_argument("solve_bvp: need k >= 1");
    const int n = grid.points - 1;
    if (k > n) throw std::invalid_argument("solve_bvp: k exceeds interior node count");
    const double h = grid.h();
    const double kappa = 1.0 / two_mu_over_hbarc2(mu_amu, consts);
    std::vector<double> diag(n);
    for (int i = 1; i <= n; ++i) {
        const double v = potential(grid.t_min + i * h);
        if (!std::isfinite(v))
            throw std::invalid_argument("solve_bvp: potential not finite at t=" +
                                        std::to_string(grid.t_min + i * h));
        diag[i - 1] = 2.0 * kappa / (h * h) + v;
    }
    OracleResult r;
    r.grid = grid;
    r.eigenvalues = detail::lowest_eigenvalues(diag, -kappa / (h * h), k);
    return r;
}

/// (4 fine - coarse)/3 per eigenvalue; fine must halve the coarse spacing
/// on the same domain.
inline OracleResult richardson_extrapolate(const OracleResult& coarse, const OracleResult& fine) {
    if (fine.grid.points != 2 * coarse.grid.points)
        throw std::invalid_argument("richardson_extrapolate: fine grid must have 2x the intervals");
    const double span = coarse.grid.t_max - coarse.grid.t_min;
    if (std::abs(fine.grid.t_min - coarse.grid.t_min) > 1e-12 * span ||
        std::abs(fine.grid.t_max - coarse.grid.t_max) > 1e-12 * span)
        throw std::invalid_argument("richardson_extrapolate: domains differ");
    const size_t m = std::min(coarse.eigenvalues.size(), fine.eigenvalues.size());
    OracleResult out;
    out.grid = fine.grid;
    out.extrapolated = true;
    out.eigenvalues.resize(m);
    out.refinement_shift.resize(m);
    for (size_t i = 0; i < m; ++i) {
        out.eigenvalues[i] = (4.0 * fine.eigenvalues[i] - coarse.eigenvalues[i]) / 3.0;
        out.refinement_shift[i] = std::abs(fine.eigenvalues[i] - coarse.eigenvalues[i]) /
                                  (1.0 + std::abs(out.eigenvalues[i]));
    }
    return out;
}

/// Two-grid solve with extrapolation; flags grids whose refinement shift
/// exceeds `shift_tol` (coarse-grid diagnostic).
inline OracleResult solve_extrapolated(const std::function<double(double)>& potential,
                                       const PhysicalConstants& consts, double mu_amu,
                                       const GridSpec& grid, int k, double shift_tol = 1e-3) {
    OracleResult coarse = solve_bvp(potential, consts, mu_amu, grid, k);
    GridSpec g2 = grid;
    g2.points *= 2;
    OracleResult fine = solve_bvp(potential, consts, mu_amu, g2, k);
    OracleResult out = richardson_extrapolate(coarse, fine);
    for (size_t i = 0; i < out.refinement_shift.size(); ++i)
        if (out.refinement_shift[i] > shift_tol)
            throw refinement_failure("grid too coarse: state " + std::to_string(i) +
                                     " shifted " + std::to_string(out.refinement_shift[i]) +
                                     " between refinements (points=" +
                                     std::to_string(grid.points) + ")");
    return out;
}

/// Greene-Aldrich-run domain from the closed-form exponents: start at the
/// origin (the repulsive-core wall), end where the slowest envelope
/// e^(-alpha eps1 t) has dropped far below the n_max state's peak.
inline GridSpec auto_domain(const PotentialParams& p, double mu_amu, const PhysicalConstants& k,
                            int n_max, int points) {
    SpectrumResult top = momentum_eigenvalue(n_max, p, mu_amu, k);
    if (!top.normalizable)
        throw std::invalid_argument("auto_domain: level n_max is not a bound state");
    const double ae = p.alpha * top.eps1;
    const double t_peak = std::log1p(top.invQ / top.eps1) / p.alpha;
    GridSpec g;
    g.t_min = 0.0;
    g.t_max = t_peak + (45.0 + 8.0 * n_max) / ae;
    g.points = points;
    return g;
}

/// Post-hoc GridSpec invariant: e^(-alpha eps1 t_max) < 1e-12 for the
/// shallowest solved state.
inline bool domain_captures_tail(const GridSpec& g, double alpha, double eps1_min) {
    return std::exp(-alpha * eps1_min * g.t_max) < 1e-12;
}

struct ApproximationError {
    std::vector<double> rel_error;  // per level
    bool t_min_sensitive = false;   // exact-run t_min sensitivity flag
};

/// |Pn(exact-potential oracle) - Pn(GA-potential oracle)| / |Pn| for
/// n = 0..n_max. Exact runs keep t_min > 0 strictly (1/t^2 singularity);
/// the t_min sensitivity is probed at 10x.
inline ApproximationError approximation_error(const PotentialParams& p,
                                              const PhysicalConstants& k, double mu_amu,
                                              int n_max, int points = 8192) {
    if (!(p.alpha > 0)) throw std::invalid_argument("approximation_error: alpha must be > 0");
    GridSpec ga_grid = auto_domain(p, mu_amu, k, n_max, points);
    auto vga = [&](double t) { return greene_aldrich_potential(t, p); };
    OracleResult ga = solve_extrapolated(vga, k, mu_amu, ga_grid, n_max + 1);

    auto vex = [&](double t) { return combined_potential(t, p); };
    GridSpec ex_grid = ga_grid;
    SpectrumResult ground = momentum_eigenvalue(0, p, mu_amu, k);
    const double t_scale = std::log1p(ground.invQ / ground.eps1) / p.alpha;  // well location
    ex_grid.t_min = 1e-6 * std::min(t_scale, ga_grid.t_max);
    OracleResult ex = solve_extrapolated(vex, k, mu_amu, ex_grid, n_max + 1);

    GridSpec ex_grid10 = ex_grid;
    ex_grid10.t_min *= 10.0;
    OracleResult ex10 = solve_extrapolated(vex, k, mu_amu, ex_grid10, n_max + 1);

    ApproximationError out;
    for (int i = 0; i <= n_max; ++i) {
        out.rel_error.push_back(std::abs(ex.eigenvalues[i] - ga.eigenvalues[i]) /
                                std::abs(ex.eigenvalues[i]));
        if (std::abs(ex.eigenvalues[i] - ex10.eigenvalues[i]) >
            1e-7 * std::abs(ex.eigenvalues[i]))
            out.t_min_sensitive = true;
    }
    return out;
}

} // namespace fhsc

#endif
