#ifndef FHSC_CONSTANTS_HPP
#define FHSC_CONSTANTS_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace fhsc {

/// Unit conversion constants for the spatial-analogue convention.
/// The time coordinate is treated like a length ("time unit" ~ angstrom),
/// so hbar_c carries eV*unit, masses convert through amu_energy, and the
/// squared elementary charge is in Gaussian-style eV*unit.
struct PhysicalConstants {
    double hbar_c;      // eV * timeunit
    double amu_energy;  // eV per a.m.u. (rest energy)
    double e2;          // eV * timeunit (squared elementary charge)
    double z;           // charge number, dimensionless

    void validate() const {
        if (!(hbar_c > 0) || !(amu_energy > 0) || !(e2 > 0) || !(z > 0))
            throw std::invalid_argument("PhysicalConstants: all fields must be strictly positive");
        if (!std::isfinite(hbar_c) || !std::isfinite(amu_energy) || !std::isfinite(e2) || !std::isfinite(z))
            throw std::invalid_argument("PhysicalConstants: all fields must be finite");
    }
};

/// Default convention: standard diatomic spectroscopic constants
/// (lengths in angstrom-like units, masses in a.m.u., energies in eV).
inline PhysicalConstants spatial_ev_constants() {
    return {1973.269804, 931.494e6, 14.3996, 1.0};
}

/// hbar = c = 1, masses in bare a.m.u., e^2 = 1. This is the convention the
/// published reference tables are closest to (see the calibration report).
inline PhysicalConstants unitless_constants() {
    return {1.0, 1.0, 1.0, 1.0};
}

inline PhysicalConstants constants_by_label(const std::string& label) {
    if (label == "spatial-ev") return spatial_ev_constants();
    if (label == "unitless") return unitless_constants();
    throw std::invalid_argument("unknown constants convention '" + label + "'");
}

/// 2*mu*c^2 / (hbar*c)^2 for a reduced mass in a.m.u.  [1/(eV*unit^2)]
inline double two_mu_over_hbarc2(double mu_amu, const PhysicalConstants& k) {
    return 2.0 * mu_amu * k.amu_energy / (k.hbar_c * k.hbar_c);
}

} // namespace fhsc

#endif
