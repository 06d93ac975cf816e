#ifndef FHSC_CALIBRATE_HPP
#define FHSC_CALIBRATE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhsc/constants.hpp"
#include "fhsc/molecule.hpp"
#include "fhsc/potential.hpp"
#include "fhsc/spectrum.hpp"

namespace fhsc {

/// How the table runs derive (A, D) from the spectroscopic record.
/// B = 2 te De, C = te^2 De, q = 1 throughout (the Kratzer well); the
/// spectroscopic record does not determine A and D, so they are searched
/// over this documented grid.
enum class ARule { Zero, PlusTeDe, MinusTeDe, Plus2TeDe, Minus2TeDe, PlusE2, MinusE2 };
enum class DRule { Zero, De, TwoDe };

inline const char* to_string(ARule a) {
    switch (a) {
        case ARule::Zero: return "0";
        case ARule::PlusTeDe: return "+te*De";
        case ARule::MinusTeDe: return "-te*De";
        case ARule::Plus2TeDe: return "+2*te*De";
        case ARule::Minus2TeDe: return "-2*te*De";
        case ARule::PlusE2: return "+e2";
        case ARule::MinusE2: return "-e2";
    }
    return "?";
}
inline const char* to_string(DRule d) {
    switch (d) {
        case DRule::Zero: return "0";
        case DRule::De: return "De";
        case DRule::TwoDe: return "2*De";
    }
    return "?";
}

inline ARule a_rule_from_string(const std::string& s) {
    for (ARule a : {ARule::Zero, ARule::PlusTeDe, ARule::MinusTeDe, ARule::Plus2TeDe,
                    ARule::Minus2TeDe, ARule::PlusE2, ARule::MinusE2})
        if (s == to_string(a)) return a;
    throw std::invalid_argument("unknown A rule '" + s + "'");
}
inline DRule d_rule_from_string(const std::string& s) {
    for (DRule d : {DRule::Zero, DRule::De, DRule::TwoDe})
        if (s == to_string(d)) return d;
    throw std::invalid_argument("unknown D rule '" + s + "'");
}

struct TableMapping {
    std::string constants_label = "spatial-ev";
    PhysicalConstants consts = spatial_ev_constants();
    ARule a_rule = ARule::Zero;
    DRule d_rule = DRule::De;

    TableMapping() = default;
    TableMapping(const std::string& label, ARule a, DRule d)
        : constants_label(label), consts(constants_by_label(label)), a_rule(a), d_rule(d) {}
    TableMapping(const std::string& label, const PhysicalConstants& k, ARule a, DRule d)
        : constants_label(label), consts(k), a_rule(a), d_rule(d) {}

    const PhysicalConstants& constants() const { return consts; }

    PotentialParams params(const Molecule& m, double alpha) const {
        const PhysicalConstants& k = constants();
        double A = 0;
        switch (a_rule) {
            case ARule::Zero: A = 0; break;
            case ARule::PlusTeDe: A = m.te * m.De; break;
            case ARule::MinusTeDe: A = -m.te * m.De; break;
            case ARule::Plus2TeDe: A = 2 * m.te * m.De; break;
            case ARule::Minus2TeDe: A = -2 * m.te * m.De; break;
            case ARule::PlusE2: A = k.e2; break;
            case ARule::MinusE2: A = -k.e2; break;
        }
        double D = 0;
        switch (d_rule) {
            case DRule::Zero: D = 0; break;
            case DRule::De: D = m.De; break;
            case DRule::TwoDe: D = 2 * m.De; break;
        }
        return {A, 2 * m.te * m.De, m.te * m.te * m.De, D, 1.0, alpha};
    }

    std::string describe() const {
        return std::string("convention=") + constants_label + " A=" + to_string(a_rule) +
               " D=" + to_string(d_rule) + " B=2*te*De C=te^2*De q=1";
    }
};

inline std::vector<TableMapping> default_mapping_candidates() {
    std::vector<TableMapping> out;
    for (const char* conv : {"spatial-ev", "unitless"})
        for (ARule a : {ARule::Zero, ARule::PlusTeDe, ARule::MinusTeDe, ARule::Plus2TeDe,
                        ARule::Minus2TeDe, ARule::PlusE2, ARule::MinusE2})
            for (DRule d : {DRule::Zero, DRule::De, DRule::TwoDe})
                out.push_back(TableMapping(conv, a, d));
    return out;
}

/// Candidate grid extended with the run's own constants when they differ
/// from both presets (the config is the knob for varying the convention).
inline std::vector<TableMapping> mapping_candidates_with(const PhysicalConstants& cfg_consts) {
    std::vector<TableMapping> out = default_mapping_candidates();
    auto same = [&](const PhysicalConstants& k) {
        return k.hbar_c == cfg_consts.hbar_c && k.amu_energy == cfg_consts.amu_energy &&
               k.e2 == cfg_consts.e2 && k.z == cfg_consts.z;
    };
    if (!same(spatial_ev_constants()) && !same(unitless_constants()))
        for (ARule a : {ARule::Zero, ARule::PlusTeDe, ARule::MinusTeDe, ARule::Plus2TeDe,
                        ARule::Minus2TeDe, ARule::PlusE2, ARule::MinusE2})
            for (DRule d : {DRule::Zero, DRule::De, DRule::TwoDe})
                out.push_back(TableMapping("config", cfg_consts, a, d));
    return out;
}

/// The calibration outcome shipped as the default mapping for spectrum,
/// wavefunction and verify runs: no candidate reproduces the published
/// reference tables within 1e-3 eV/c, and this is the best fit (max CO-column
/// residual 0.0528 eV/c). Tests pin it against a fresh calibrate() run.
inline TableMapping default_bestfit_mapping() {
    return TableMapping("unitless", ARule::PlusE2, DRule::De);
}

struct CandidateScore {
    TableMapping mapping;
    double max_residual = 0;                // over the target column
    std::vector<double> residuals;          // per entry, model - target
};

struct CalibrationReport {
    bool locked = false;                    // true: a candidate reproduced the target
    TableMapping best;
    double tolerance = 1e-3;                // eV/c, per entry
    std::vector<double> target;             // published reference column (or synthetic)
    std::vector<double> best_values;
    std::vector<double> best_residuals;
    double best_max_residual = 0;
    std::vector<CandidateScore> ranking;    // all candidates, best first
    std::string target_molecule = "CO";
    double target_alpha = 0.001;
    std::string config_hash;                // signer, filled by the CLI
};

/// Exhaustive search of the candidate grid against a reference column
/// (the published CO reference column by default). A failed search is a valid,
/// reported outcome: status NOT-REPRODUCED with best-fit residuals.
inline CalibrationReport calibrate(const Molecule& target_mol, double alpha,
                                   const std::vector<double>& target_column,
                                   const std::vector<TableMapping>& candidates,
                                   double tolerance = 1e-3) {
    CalibrationReport rep;
    rep.tolerance = tolerance;
    rep.target = target_column;
    rep.target_molecule = target_mol.name;
    rep.target_alpha = alpha;
    for (const auto& cand : candidates) {
        CandidateScore sc;
        sc.mapping = cand;
        const PhysicalConstants& k = cand.constants();
        const PotentialParams p = cand.params(target_mol, alpha);
        double mx = 0;
        for (size_t n = 0; n < target_column.size(); ++n) {
            const double v = momentum_eigenvalue((int)n, p, target_mol.mu, k).Pn;
            sc.residuals.push_back(v - target_column[n]);
            mx = std::max(mx, std::abs(v - target_column[n]));
        }
        sc.max_residual = mx;
        rep.ranking.push_back(std::move(sc));
    }
    std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                     [](const CandidateScore& a, const CandidateScore& b) {
                         return a.max_residual < b.max_residual;
                     });
    if (!rep.ranking.empty()) {
        const CandidateScore& win = rep.ranking.front();
        rep.best = win.mapping;
        rep.best_residuals = win.residuals;
        rep.best_max_residual = win.max_residual;
        rep.locked = win.max_residual <= tolerance;
        const PhysicalConstants& k = win.mapping.constants();
        const PotentialParams p = win.mapping.params(target_mol, alpha);
        for (size_t n = 0; n < target_column.size(); ++n)
            rep.best_values.push_back(momentum_eigenvalue((int)n, p, target_mol.mu, k).Pn);
    }
    return rep;
}

inline nlohmann::json to_json(const TableMapping& m) {
    return {{"convention", m.constants_label},
            {"constants",
             {{"hbar_c_ev_timeunit", m.consts.hbar_c},
              {"amu_energy_ev", m.consts.amu_energy},
              {"e2_ev_timeunit", m.consts.e2},
              {"charge_z", m.consts.z}}},
            {"A", to_string(m.a_rule)},
            {"D", to_string(m.d_rule)},
            {"B", "2*te*De"},
            {"C", "te^2*De"},
            {"q", 1.0}};
}

inline TableMapping mapping_from_json(const nlohmann::json& j) {
    TableMapping m;
    m.constants_label = j.at("convention").get<std::string>();
    if (j.contains("constants")) {
        const auto& c = j.at("constants");
        m.consts = {c.at("hbar_c_ev_timeunit").get<double>(),
                    c.at("amu_energy_ev").get<double>(),
                    c.at("e2_ev_timeunit").get<double>(), c.at("charge_z").get<double>()};
        m.consts.validate();
    } else {
        m.consts = constants_by_label(m.constants_label);
    }
    m.a_rule = a_rule_from_string(j.at("A").get<std::string>());
    m.d_rule = d_rule_from_string(j.at("D").get<std::string>());
    return m;
}

inline nlohmann::json to_json(const CalibrationReport& rep, int ranking_depth = 8) {
    nlohmann::json j;
    j["status"] = rep.locked ? "LOCKED" : "NOT-REPRODUCED";
    j["tolerance_ev_per_c"] = rep.tolerance;
    j["target_molecule"] = rep.target_molecule;
    j["target_alpha"] = rep.target_alpha;
    j["target"] = rep.target;
    j["best_mapping"] = to_json(rep.best);
    j["best_values"] = rep.best_values;
    j["best_residuals"] = rep.best_residuals;
    j["best_max_residual"] = rep.best_max_residual;
    j["candidates_searched"] = rep.ranking.size();
    j["config_hash"] = rep.config_hash;
    nlohmann::json rank = nlohmann::json::array();
    for (size_t i = 0; i < rep.ranking.size() && (int)i < ranking_depth; ++i)
        rank.push_back({{"mapping", to_json(rep.ranking[i].mapping)},
                        {"max_residual", rep.ranking[i].max_residual}});
    j["ranking"] = rank;
    return j;
}

} // namespace fhsc

#endif
