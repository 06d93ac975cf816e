#ifndef FHSC_MOLECULE_HPP
#define FHSC_MOLECULE_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhsc {

/// Spectroscopic record for one diatomic molecule.
struct Molecule {
    std::string name;
    double De;  // dissociation energy, eV
    double te;  // equilibrium point, time units
    double mu;  // reduced mass, a.m.u.

    void validate() const {
        if (!(De > 0) || !(te > 0) || !(mu > 0))
            throw std::invalid_argument("Molecule '" + name + "': De, te, mu must be positive");
    }
};

/// Built-in database (CO, NO, O2, I2).
inline const std::vector<Molecule>& builtin_molecules() {
    static const std::vector<Molecule> db = {
        {"CO", 10.84514471, 1.1282, 6.860586000},
        {"NO", 8.043782568, 1.1508, 7.468441000},
        {"O2", 5.156658828, 1.2080, 7.997457504},
        {"I2", 1.581791863, 2.6620, 63.45223502},
    };
    return db;
}

inline const Molecule& find_molecule(const std::vector<Molecule>& db, const std::string& name) {
    for (const auto& m : db)
        if (m.name == name) return m;
    throw std::invalid_argument("unknown molecule '" + name + "'");
}

/// CSV override, header must be exactly: name,De_eV,te,mu_amu
inline std::vector<Molecule> load_molecules_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("molecule CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "name,De_eV,te,mu_amu")
        throw std::runtime_error("molecule CSV: bad header '" + line +
                                 "' (expected 'name,De_eV,te,mu_amu')");
    std::vector<Molecule> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        Molecule m;
        std::string field;
        if (!std::getline(ss, m.name, ',')) goto bad;
        try {
            if (!std::getline(ss, field, ',')) goto bad;
            m.De = std::stod(field);
            if (!std::getline(ss, field, ',')) goto bad;
            m.te = std::stod(field);
            if (!std::getline(ss, field, ',')) goto bad;
            m.mu = std::stod(field);
        } catch (const std::exception&) {
            goto bad;
        }
        m.validate();
        out.push_back(std::move(m));
        continue;
    bad:
        throw std::runtime_error("molecule CSV: malformed line " + std::to_string(lineno));
    }
    if (out.empty()) throw std::runtime_error("molecule CSV: no records");
    return out;
}

inline std::vector<Molecule> load_molecules_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open molecule CSV '" + path + "'");
    return load_molecules_csv(f);
}

} // namespace fhsc

#endif
