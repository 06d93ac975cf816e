#ifndef FHSC_POTENTIAL_HPP
#define FHSC_POTENTIAL_HPP

#include <cmath>
#include <stdexcept>

#include "fhsc/molecule.hpp"

namespace fhsc {

/// Six-parameter combined Kratzer plus screened-Coulomb potential
///   V(t) = D - B/t + q*C/t^2 + A*e^(-alpha*t)/t
struct PotentialParams {
    double A;      // eV * timeunit, screened-Coulomb strength
    double B;      // eV * timeunit
    double C;      // eV * timeunit^2
    double D;      // eV
    double q;      // dimensionless
    double alpha;  // 1 / timeunit

    void validate() const {
        if (!(alpha >= 0))
            throw std::invalid_argument("PotentialParams: alpha must be >= 0");
        for (double v : {A, B, C, D, q, alpha})
            if (!std::isfinite(v))
                throw std::invalid_argument("PotentialParams: all fields must be finite");
    }
};

/// Modified Kratzer well: B = 2*te*De, C = te^2*De, minimum -De at te.
inline PotentialParams kratzer_params(const Molecule& m, double alpha = 0.0) {
    return {0.0, 2.0 * m.te * m.De, m.te * m.te * m.De, 0.0, 1.0, alpha};
}

inline double combined_potential(double t, const PotentialParams& p) {
    if (!(t > 0))
        throw std::domain_error("combined_potential: t must be > 0 (singular at origin)");
    return p.D - p.B / t + p.q * p.C / (t * t) + p.A * std::exp(-p.alpha * t) / t;
}

/// Greene-Aldrich surrogate: every 1/t replaced by alpha/(1 - e^(-alpha t)).
/// Note the t->inf limit is D - B*alpha + q*C*alpha^2, not D: the surrogate
/// tends to alpha, not 0.
inline double greene_aldrich_potential(double t, const PotentialParams& p) {
    if (!(p.alpha > 0))
        throw std::invalid_argument("greene_aldrich_potential: alpha must be > 0");
    if (!(t > 0))
        throw std::domain_error("greene_aldrich_potential: t must be > 0");
    const double s = std::exp(-p.alpha * t);
    const double one_minus_s = -std::expm1(-p.alpha * t);  // 1 - s, accurate for small alpha*t
    const double g = p.alpha / one_minus_s;                // surrogate for 1/t
    return p.D - p.B * g + p.q * p.C * g * g + p.A * g * s;
}

} // namespace fhsc

#endif
