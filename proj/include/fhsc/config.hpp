#ifndef FHSC_CONFIG_HPP
#define FHSC_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhsc/constants.hpp"
#include "fhsc/molecule.hpp"

namespace fhsc {

/// Run configuration. The file format is flat `key = value` lines with
/// units spelled out in the key names, one decision per line, `#` comments.
struct RunConfig {
    PhysicalConstants constants = spatial_ev_constants();
    std::string constants_label = "spatial-ev";
    std::vector<double> alphas = {0.001, 0.05, 0.1};
    int n_max = 9;
    std::string output_format = "csv";  // csv | json
    std::string output_dir = "out";
    std::string molecules_csv;          // optional override
    // figure-data grids; defaults bracket the trends discussed in the text
    double fig_t_min = 0.3;
    double fig_t_max = 12.0;
    int fig_t_points = 400;
    double fig_alpha_min = 0.001;
    double fig_alpha_max = 5.0;
    int fig_alpha_points = 500;
    double fig_de_scale_min = 1.0 / 12.0;  // sweep De from De*min_scale ...
    double fig_de_scale_max = 2.0;         // ... to De*max_scale
    int fig_de_points = 24;

    void validate() const {
        constants.validate();
        if (n_max < 0) throw std::invalid_argument("config: n_max must be >= 0");
        if (alphas.empty()) throw std::invalid_argument("config: alphas must be nonempty");
        for (double a : alphas)
            if (!(a > 0)) throw std::invalid_argument("config: alphas must be positive");
        if (output_format != "csv" && output_format != "json")
            throw std::invalid_argument("config: output_format must be csv or json");
        if (fig_t_points < 2 || fig_alpha_points < 2 || fig_de_points < 2)
            throw std::invalid_argument("config: figure grids need at least 2 points");
    }

    std::vector<Molecule> molecules() const {
        if (!molecules_csv.empty()) return load_molecules_csv(molecules_csv);
        return builtin_molecules();
    }

    /// Canonical serialization: every knob, fixed order. Hash input and the
    /// artifact-header echo both come from this.
    std::string canonical() const {
        std::ostringstream os;
        os.precision(17);
        os << "hbar_c_ev_timeunit = " << constants.hbar_c << "\n"
           << "amu_energy_ev = " << constants.amu_energy << "\n"
           << "e2_ev_timeunit = " << constants.e2 << "\n"
           << "charge_z = " << constants.z << "\n"
           << "alpha_inverse_timeunit = ";
        for (size_t i = 0; i < alphas.size(); ++i) os << (i ? "," : "") << alphas[i];
        os << "\n"
           << "n_max = " << n_max << "\n"
           << "output_format = " << output_format << "\n"
           << "output_dir = " << output_dir << "\n"
           << "molecules_csv = " << molecules_csv << "\n"
           << "fig_t_min_timeunit = " << fig_t_min << "\n"
           << "fig_t_max_timeunit = " << fig_t_max << "\n"
           << "fig_t_points = " << fig_t_points << "\n"
           << "fig_alpha_min_inverse_timeunit = " << fig_alpha_min << "\n"
           << "fig_alpha_max_inverse_timeunit = " << fig_alpha_max << "\n"
           << "fig_alpha_points = " << fig_alpha_points << "\n"
           << "fig_de_scale_min = " << fig_de_scale_min << "\n"
           << "fig_de_scale_max = " << fig_de_scale_max << "\n"
           << "fig_de_points = " << fig_de_points << "\n";
        return os.str();
    }

    std::string hash() const;
};

/// FNV-1a 64-bit, hex. Enough to make artifact headers self-identifying.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string RunConfig::hash() const {
    std::ostringstream os;
    os << std::hex << fnv1a64(canonical());
    return os.str();
}

namespace detail {
inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}
inline std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::runtime_error("config: bad number '" + item + "' for key " + key);
        }
    }
    return out;
}
} // namespace detail

/// Strict parser: unknown keys are errors (the key names carry the units,
/// a typo must not silently fall back to a default).
inline RunConfig parse_config(std::istream& in) {
    RunConfig c;
    bool alphas_seen = false;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hashpos = line.find('#');
        if (hashpos != std::string::npos) line.erase(hashpos);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        auto num = [&]() {
            try {
                return std::stod(val);
            } catch (const std::exception&) {
                throw std::runtime_error("config: bad number '" + val + "' for key " + key);
            }
        };
        if (key == "hbar_c_ev_timeunit") c.constants.hbar_c = num();
        else if (key == "amu_energy_ev") c.constants.amu_energy = num();
        else if (key == "e2_ev_timeunit") c.constants.e2 = num();
        else if (key == "charge_z") c.constants.z = num();
        else if (key == "constants_convention") {
            c.constants_label = val;
            c.constants = constants_by_label(val);
        } else if (key == "alpha_inverse_timeunit") {
            auto vals = detail::parse_double_list(val, key);
            if (!alphas_seen) c.alphas.clear();
            alphas_seen = true;
            c.alphas.insert(c.alphas.end(), vals.begin(), vals.end());
        } else if (key == "n_max") c.n_max = (int)num();
        else if (key == "output_format") c.output_format = val;
        else if (key == "output_dir") c.output_dir = val;
        else if (key == "molecules_csv") c.molecules_csv = val;
        else if (key == "fig_t_min_timeunit") c.fig_t_min = num();
        else if (key == "fig_t_max_timeunit") c.fig_t_max = num();
        else if (key == "fig_t_points") c.fig_t_points = (int)num();
        else if (key == "fig_alpha_min_inverse_timeunit") c.fig_alpha_min = num();
        else if (key == "fig_alpha_max_inverse_timeunit") c.fig_alpha_max = num();
        else if (key == "fig_alpha_points") c.fig_alpha_points = (int)num();
        else if (key == "fig_de_scale_min") c.fig_de_scale_min = num();
        else if (key == "fig_de_scale_max") c.fig_de_scale_max = num();
        else if (key == "fig_de_points") c.fig_de_points = (int)num();
        else
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(f);
}

} // namespace fhsc

#endif
