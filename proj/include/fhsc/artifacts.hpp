#ifndef FHSC_ARTIFACTS_HPP
#define FHSC_ARTIFACTS_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhsc/calibrate.hpp"
#include "fhsc/config.hpp"
#include "fhsc/nu.hpp"
#include "fhsc/oracle.hpp"
#include "fhsc/spectrum.hpp"
#include "fhsc/wavefn.hpp"

namespace fhsc {

struct contract_breach : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

inline std::string alpha_tag(double alpha) {
    std::ostringstream os;
    os << alpha;
    return os.str();
}

/// Shared artifact preamble: config hash and the constants the run actually
/// computed with, no timestamps (identical config + inputs must give
/// byte-identical files).
inline std::string artifact_header(const RunConfig& cfg, const PhysicalConstants& used,
                                   const std::string& extra = "") {
    std::ostringstream os;
    os << "# config_hash=" << cfg.hash() << "\n";
    os << "# constants: hbar_c_ev_timeunit=" << format9(used.hbar_c)
       << " amu_energy_ev=" << format9(used.amu_energy)
       << " e2_ev_timeunit=" << format9(used.e2) << " charge_z=" << format9(used.z) << "\n";
    if (!extra.empty()) os << extra;
    return os.str();
}

/// One quantized-momentum table (rows n = 0..n_max, one column per
/// molecule), published-table layout: 9-decimal fixed point.
inline std::string render_table(const RunConfig& cfg, const TableMapping& mapping,
                                const std::vector<Molecule>& mols, double alpha, int n_max) {
    const PhysicalConstants k = mapping.constants();
    std::ostringstream os;
    os << "# FH quantized momentum eigenvalues (eV/c)\n";
    os << artifact_header(cfg, k, "# mapping: " + mapping.describe() + "\n");
    os << "# alpha_inverse_timeunit=" << alpha_tag(alpha) << "\n";
    os << "n";
    for (const auto& m : mols) os << "," << m.name;
    os << "\n";
    for (int n = 0; n <= n_max; ++n) {
        os << n;
        for (const auto& m : mols)
            os << "," << format9(momentum_eigenvalue(n, mapping.params(m, alpha), m.mu, k).Pn);
        os << "\n";
    }
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
}

/// table command body: one file per alpha.
inline std::vector<std::string> emit_tables(const RunConfig& cfg, const TableMapping& mapping) {
    const auto mols = cfg.molecules();
    std::vector<std::string> written;
    for (double a : cfg.alphas) {
        const std::string body = render_table(cfg, mapping, mols, a, cfg.n_max);
        const std::string path =
            cfg.output_dir + "/table_alpha_" + alpha_tag(a) + "." + cfg.output_format;
        if (cfg.output_format == "json") {
            // same data, JSON shape
            nlohmann::json j;
            j["alpha_inverse_timeunit"] = a;
            j["config_hash"] = cfg.hash();
            j["mapping"] = to_json(mapping);
            const PhysicalConstants k = mapping.constants();
            for (const auto& m : mols) {
                std::vector<double> col;
                for (int n = 0; n <= cfg.n_max; ++n)
                    col.push_back(momentum_eigenvalue(n, mapping.params(m, a), m.mu, k).Pn);
                j["Pn_ev_per_c"][m.name] = col;
            }
            write_file(path, j.dump(2) + "\n");
        } else {
            write_file(path, body);
        }
        written.push_back(path);
    }
    return written;
}

enum class FigureKind {
    PotentialVsT,
    PotentialVsTAlpha,
    PnVsAlpha,
    PnVsDe,
    KratzerPnVsDe,
    CoulombPnVsAlpha,
};

inline FigureKind figure_kind_from_string(const std::string& s) {
    if (s == "potential_vs_t") return FigureKind::PotentialVsT;
    if (s == "potential_vs_t_alpha") return FigureKind::PotentialVsTAlpha;
    if (s == "pn_vs_alpha") return FigureKind::PnVsAlpha;
    if (s == "pn_vs_de") return FigureKind::PnVsDe;
    if (s == "kratzer_pn_vs_de") return FigureKind::KratzerPnVsDe;
    if (s == "coulomb_pn_vs_alpha") return FigureKind::CoulombPnVsAlpha;
    throw std::invalid_argument("unknown figure name '" + s + "'");
}

/// Grid-sampled data behind one figure, one file per molecule.
inline std::vector<std::string> emit_figure_data(const RunConfig& cfg, FigureKind kind,
                                                 const TableMapping& mapping,
                                                 const std::string& figure_name) {
    const auto mols = cfg.molecules();
    const PhysicalConstants k = mapping.constants();
    std::vector<std::string> written;
    for (const auto& m : mols) {
        std::ostringstream os;
        os << "# figure=" << figure_name << " molecule=" << m.name << "\n";
        os << artifact_header(cfg, k, "# mapping: " + mapping.describe() + "\n");
        const double alpha0 = cfg.alphas.front();
        switch (kind) {
            case FigureKind::PotentialVsT: {
                os << "t,V_exact,V_greene_aldrich\n";
                const PotentialParams p = mapping.params(m, alpha0);
                for (int i = 0; i < cfg.fig_t_points; ++i) {
                    const double t = cfg.fig_t_min + (cfg.fig_t_max - cfg.fig_t_min) * i /
                                                         (cfg.fig_t_points - 1);
                    os << format9(t) << "," << format9(combined_potential(t, p)) << ","
                       << format9(greene_aldrich_potential(t, p)) << "\n";
                }
                break;
            }
            case FigureKind::PotentialVsTAlpha: {
                os << "t,alpha,V\n";
                for (int j = 0; j < cfg.fig_alpha_points; ++j) {
                    const double a = cfg.fig_alpha_min + (cfg.fig_alpha_max - cfg.fig_alpha_min) *
                                                             j / (cfg.fig_alpha_points - 1);
                    const PotentialParams p = mapping.params(m, a);
                    for (int i = 0; i < cfg.fig_t_points; ++i) {
                        const double t = cfg.fig_t_min + (cfg.fig_t_max - cfg.fig_t_min) * i /
                                                             (cfg.fig_t_points - 1);
                        os << format9(t) << "," << format9(a) << ","
                           << format9(combined_potential(t, p)) << "\n";
                    }
                }
                break;
            }
            case FigureKind::PnVsAlpha: {
                // log-spaced so the continuum crossing is locatable
                os << "alpha,n,Pn,continuum_threshold,bound\n";
                for (int j = 0; j < cfg.fig_alpha_points; ++j) {
                    const double a =
                        cfg.fig_alpha_min * std::pow(cfg.fig_alpha_max / cfg.fig_alpha_min,
                                                     (double)j / (cfg.fig_alpha_points - 1));
                    const PotentialParams p = mapping.params(m, a);
                    for (int n = 0; n <= cfg.n_max; ++n) {
                        const SpectrumResult r = momentum_eigenvalue(n, p, m.mu, k);
                        const double thr = p.D - p.B * a + p.q * p.C * a * a;
                        os << format9(a) << "," << n << "," << format9(r.Pn) << ","
                           << format9(thr) << "," << (r.normalizable ? 1 : 0) << "\n";
                    }
                }
                break;
            }
            case FigureKind::PnVsDe: {
                os << "De,n,Pn\n";
                for (int j = 0; j < cfg.fig_de_points; ++j) {
                    Molecule mm = m;
                    mm.De = m.De * (cfg.fig_de_scale_min +
                                    (cfg.fig_de_scale_max - cfg.fig_de_scale_min) * j /
                                        (cfg.fig_de_points - 1));
                    const PotentialParams p = mapping.params(mm, alpha0);
                    for (int n = 0; n <= cfg.n_max; ++n)
                        os << format9(mm.De) << "," << n << ","
                           << format9(momentum_eigenvalue(n, p, m.mu, k).Pn) << "\n";
                }
                break;
            }
            case FigureKind::KratzerPnVsDe: {
                os << "De,n,Pn\n";
                for (int j = 0; j < cfg.fig_de_points; ++j) {
                    Molecule mm = m;
                    mm.De = m.De * (cfg.fig_de_scale_min +
                                    (cfg.fig_de_scale_max - cfg.fig_de_scale_min) * j /
                                        (cfg.fig_de_points - 1));
                    for (int n = 0; n <= cfg.n_max; ++n)
                        os << format9(mm.De) << "," << n << ","
                           << format9(kratzer_momentum(n, mm, k).Pn) << "\n";
                }
                break;
            }
            case FigureKind::CoulombPnVsAlpha: {
                os << "alpha,n,Pn,coulomb_limit,bound\n";
                for (int j = 0; j < cfg.fig_alpha_points; ++j) {
                    const double a =
                        cfg.fig_alpha_min * std::pow(cfg.fig_alpha_max / cfg.fig_alpha_min,
                                                     (double)j / (cfg.fig_alpha_points - 1));
                    for (int n = 0; n <= cfg.n_max; ++n) {
                        const SpectrumResult r =
                            screened_coulomb_momentum(n, k.z, a, m.mu, k);
                        os << format9(a) << "," << n << "," << format9(r.Pn) << ","
                           << format9(coulomb_momentum(n, k.z, m.mu, k)) << ","
                           << (r.normalizable ? 1 : 0) << "\n";
                    }
                }
                break;
            }
        }
        const std::string path =
            cfg.output_dir + "/figure_" + figure_name + "_" + m.name + ".csv";
        write_file(path, os.str());
        written.push_back(path);
    }
    return written;
}

/// Wavefunction sampling export: CSV `t,psi_n` with metadata header.
inline std::string render_wavefunction_csv(const RunConfig& cfg, const std::string& molecule,
                                           const WavefunctionSpec& spec, double t_min,
                                           double t_max, int points) {
    std::ostringstream os;
    os << "# molecule=" << molecule << " n=" << spec.n << " alpha=" << alpha_tag(spec.alpha)
       << " Bn=" << spec.Bn() << " log_Bn=" << spec.log_bn << " eps1=" << spec.eps1
       << " invQ=" << spec.invQ << "\n";
    os << artifact_header(cfg, spec.consts);
    os << "t,psi_n\n";
    for (int i = 0; i < points; ++i) {
        const double t = t_min + (t_max - t_min) * i / (points - 1);
        std::ostringstream v;
        v << std::setprecision(12) << psi(t, spec);
        os << format9(t) << "," << v.str() << "\n";
    }
    return os.str();
}

struct VerifyEntry {
    std::string molecule;
    double alpha = 0;
    int n = 0;
    double closed_form = 0;
    double oracle = 0;
    double rel_err = 0;
    int grid_points = 0;
    bool extrapolated = false;
};

struct WavefnCheck {
    std::string molecule;
    double alpha = 0;
    int n = 0;
    double norm_deviation = 0;       // |norm - 1|
    double max_overlap = 0;          // worst |<m|n>| against lower levels
    int nodes = 0;
    bool nodes_ok = false;
    double scheme_disagreement = 0;  // adaptive vs fixed-order quadrature
};

struct VerifyReport {
    std::vector<VerifyEntry> entries;
    std::vector<WavefnCheck> wavefn;
    double spectrum_tolerance = 1e-6;
    double wavefn_tolerance = 1e-8;
    bool pass = false;
};

/// Oracle cross-check of the closed form plus the wavefunction suite.
/// wavefn_levels caps the per-cell eigenfunction work (norms, pairwise
/// overlaps, node counts); the spectrum check always runs to cfg.n_max.
inline VerifyReport run_verification(const RunConfig& cfg, const TableMapping& mapping,
                                     const std::vector<Molecule>& mols, int oracle_points = 8192,
                                     int wavefn_levels = 3) {
    VerifyReport rep;
    const PhysicalConstants k = mapping.constants();
    bool ok = true;
    for (const auto& m : mols) {
        for (double a : cfg.alphas) {
            const PotentialParams p = mapping.params(m, a);
            GridSpec grid = auto_domain(p, m.mu, k, cfg.n_max, oracle_points);
            auto vga = [&](double t) { return greene_aldrich_potential(t, p); };
            OracleResult orc = solve_extrapolated(vga, k, m.mu, grid, cfg.n_max + 1);
            for (int n = 0; n <= cfg.n_max; ++n) {
                const SpectrumResult r = momentum_eigenvalue(n, p, m.mu, k);
                VerifyEntry e;
                e.molecule = m.name;
                e.alpha = a;
                e.n = n;
                e.closed_form = r.Pn;
                e.oracle = orc.eigenvalues[n];
                e.rel_err = std::abs(e.closed_form - e.oracle) / std::abs(e.closed_form);
                e.grid_points = orc.grid.points;
                e.extrapolated = orc.extrapolated;
                rep.entries.push_back(e);
                if (e.rel_err > rep.spectrum_tolerance) ok = false;
            }
            // eigenfunction spot checks on the lowest levels
            std::vector<WavefunctionSpec> specs;
            for (int n = 0; n < wavefn_levels && n <= cfg.n_max; ++n) {
                const SpectrumResult r = momentum_eigenvalue(n, p, m.mu, k);
                WavefunctionSpec s = normalize(wavefunction_spec(r, p, m.mu, k));
                WavefnCheck c;
                c.molecule = m.name;
                c.alpha = a;
                c.n = n;
                c.norm_deviation = std::abs(overlap(s, s) - 1.0);
                c.scheme_disagreement = norm_scheme_disagreement(s);
                for (const auto& prev : specs)
                    c.max_overlap = std::max(c.max_overlap, std::abs(overlap(prev, s)));
                c.nodes = count_nodes(s);
                c.nodes_ok = c.nodes == n;
                rep.wavefn.push_back(c);
                specs.push_back(std::move(s));
                if (c.norm_deviation > rep.wavefn_tolerance ||
                    c.max_overlap > rep.wavefn_tolerance || !c.nodes_ok)
                    ok = false;
            }
        }
    }
    rep.pass = ok;
    return rep;
}

inline nlohmann::json to_json(const VerifyReport& rep, const RunConfig& cfg) {
    nlohmann::json j;
    j["config_hash"] = cfg.hash();
    j["spectrum_tolerance"] = rep.spectrum_tolerance;
    j["wavefn_tolerance"] = rep.wavefn_tolerance;
    j["pass"] = rep.pass;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : rep.entries)
        j["entries"].push_back({{"molecule", e.molecule},
                                {"alpha", e.alpha},
                                {"n", e.n},
                                {"closed_form", e.closed_form},
                                {"oracle", e.oracle},
                                {"rel_err", e.rel_err},
                                {"grid_points", e.grid_points},
                                {"extrapolated", e.extrapolated}});
    j["wavefn"] = nlohmann::json::array();
    for (const auto& c : rep.wavefn)
        j["wavefn"].push_back({{"molecule", c.molecule},
                               {"alpha", c.alpha},
                               {"n", c.n},
                               {"norm_deviation", c.norm_deviation},
                               {"max_overlap", c.max_overlap},
                               {"nodes", c.nodes},
                               {"nodes_ok", c.nodes_ok},
                               {"scheme_disagreement", c.scheme_disagreement}});
    return j;
}

/// Debug dump of every (k, pi-sign) reduction candidate with its
/// admissibility verdict.
inline nlohmann::json nu_debug_dump(const HypergeometricForm& f) {
    nlohmann::json j;
    j["tau_tilde"] = {(double)f.tau_tilde[0], (double)f.tau_tilde[1]};
    j["sigma"] = {(double)f.sigma[0], (double)f.sigma[1], (double)f.sigma[2]};
    j["sigma_tilde"] = {(double)f.sigma_tilde[0], (double)f.sigma_tilde[1],
                        (double)f.sigma_tilde[2]};
    j["candidates"] = nlohmann::json::array();
    for (const NUReduction& c : reduce_all(f)) {
        nlohmann::json b;
        b["k"] = (double)c.k;
        b["k_branch"] = c.k_plus ? "k_plus" : "k_minus";
        b["pi_branch"] = c.pi_plus ? "pi_plus" : "pi_minus";
        b["pi"] = {(double)c.pi_poly[0], (double)c.pi_poly[1]};
        b["tau"] = {(double)c.tau_poly[0], (double)c.tau_poly[1]};
        b["lambda"] = (double)c.lambda;
        b["lambda_n"] = {{"quadratic", (double)c.lambda_n_quad},
                         {"linear", (double)c.lambda_n_lin}};
        b["admissible"] = c.admissible;
        try {
            auto [p, r] = weight_function(c, f);
            b["weight_exponents"] = {(double)p, (double)r};
            b["weight_integrable"] = p > -1.0L && r > -1.0L;
        } catch (const std::domain_error&) {
            b["weight_exponents"] = nullptr;
        }
        j["candidates"].push_back(b);
    }
    return j;
}

/// Load a golden table CSV (header `n,CO,NO,O2,I2`, `#` comments allowed).
inline std::vector<std::vector<double>> load_table_csv(const std::string& path,
                                                       std::vector<std::string>* names = nullptr) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open table '" + path + "'");
    std::string line;
    std::vector<std::vector<double>> rows;
    bool header_seen = false;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (names) {
                std::istringstream ss(line);
                std::string cell;
                std::getline(ss, cell, ',');  // "n"
                while (std::getline(ss, cell, ',')) names->push_back(cell);
            }
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // row index
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("table '" + path + "' has no data rows");
    return rows;
}

} // namespace fhsc

#endif
