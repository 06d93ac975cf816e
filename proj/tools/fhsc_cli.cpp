// fhsc: quantized momentum spectra of the Feinberg-Horodecki equation with
// the combined Kratzer plus screened-Coulomb potential.
//
// Verbs: table, figure-data, verify, calibrate, spectrum, wavefunction.
// Exit codes: 0 success, 2 usage, 3 contract breach, 4 solver failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fhsc/artifacts.hpp"
#include "fhsc/calibrate.hpp"
#include "fhsc/config.hpp"
#include "fhsc/oracle.hpp"
#include "fhsc/spectrum.hpp"
#include "fhsc/wavefn.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<double> alphas;
    int nmax = -1;
    std::string molecule;
    std::string format;
    std::string out;
    std::string mapping_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_mapping = true) {
    cmd->add_option("--config", o.config_path, "flat key=value config file");
    cmd->add_option("--alpha", o.alphas, "screening parameter, repeatable")->expected(-1);
    cmd->add_option("--nmax", o.nmax, "highest level index");
    cmd->add_option("--molecule", o.molecule, "restrict to one molecule");
    cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out, "output directory");
    if (with_mapping)
        cmd->add_option("--mapping", o.mapping_path,
                        "mapping record from 'fhsc calibrate' (or 'best-fit')");
}

fhsc::RunConfig load_config(const CommonOpts& o) {
    fhsc::RunConfig cfg =
        o.config_path.empty() ? fhsc::RunConfig{} : fhsc::parse_config_file(o.config_path);
    if (!o.alphas.empty()) cfg.alphas = o.alphas;
    if (o.nmax >= 0) cfg.n_max = o.nmax;
    if (!o.format.empty()) cfg.output_format = o.format;
    if (!o.out.empty()) cfg.output_dir = o.out;
    cfg.validate();
    return cfg;
}

std::vector<fhsc::Molecule> select_molecules(const fhsc::RunConfig& cfg, const CommonOpts& o) {
    auto mols = cfg.molecules();
    if (o.molecule.empty()) return mols;
    return {fhsc::find_molecule(mols, o.molecule)};
}

fhsc::TableMapping load_mapping(const std::string& path) {
    if (path == "best-fit") return fhsc::default_bestfit_mapping();
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open mapping '" + path + "'");
    nlohmann::json j;
    f >> j;
    if (j.contains("best_mapping")) j = j["best_mapping"];  // accept a calibration report too
    return fhsc::mapping_from_json(j);
}

int cmd_table(const CommonOpts& o) {
    if (o.mapping_path.empty()) {
        std::cerr << "table: no mapping set. Run 'fhsc calibrate' first and pass\n"
                     "       --mapping <out>/mapping.json (or --mapping best-fit).\n";
        return 2;
    }
    fhsc::RunConfig cfg = load_config(o);
    fhsc::TableMapping mapping = load_mapping(o.mapping_path);
    for (const auto& path : fhsc::emit_tables(cfg, mapping)) std::cout << path << "\n";
    return 0;
}

int cmd_figure_data(const CommonOpts& o, const std::string& figure) {
    fhsc::RunConfig cfg = load_config(o);
    fhsc::FigureKind kind = fhsc::figure_kind_from_string(figure);  // throws on bad name
    fhsc::TableMapping mapping = o.mapping_path.empty() ? fhsc::default_bestfit_mapping()
                                                        : load_mapping(o.mapping_path);
    fhsc::RunConfig sel = cfg;
    for (const auto& path : fhsc::emit_figure_data(sel, kind, mapping, figure))
        std::cout << path << "\n";
    return 0;
}

int cmd_calibrate(const CommonOpts& o, const std::string& target_path, double tolerance) {
    fhsc::RunConfig cfg = load_config(o);
    std::vector<std::string> names;
    auto rows = fhsc::load_table_csv(target_path, &names);
    const std::string target_name = o.molecule.empty() ? "CO" : o.molecule;
    size_t col = 0;
    for (; col < names.size(); ++col)
        if (names[col] == target_name) break;
    if (col == names.size())
        throw std::runtime_error("calibrate: target table has no column '" + target_name + "'");
    std::vector<double> column;
    for (const auto& r : rows) column.push_back(r.at(col));
    const double alpha = cfg.alphas.front();
    const fhsc::Molecule mol = fhsc::find_molecule(cfg.molecules(), target_name);

    fhsc::CalibrationReport rep =
        fhsc::calibrate(mol, alpha, column, fhsc::mapping_candidates_with(cfg.constants),
                        tolerance);
    rep.config_hash = cfg.hash();

    fhsc::write_file(cfg.output_dir + "/calibration.json", to_json(rep).dump(2) + "\n");
    nlohmann::json mj = to_json(rep.best);
    mj["status"] = rep.locked ? "LOCKED" : "NOT-REPRODUCED";
    mj["config_hash"] = cfg.hash();
    fhsc::write_file(cfg.output_dir + "/mapping.json", mj.dump(2) + "\n");

    std::cout << "status: " << (rep.locked ? "LOCKED" : "NOT-REPRODUCED") << "\n";
    std::cout << "candidates searched: " << rep.ranking.size() << "\n";
    std::cout << "best: " << rep.best.describe() << "\n";
    std::cout << "max per-entry residual: " << rep.best_max_residual << " eV/c (tolerance "
              << rep.tolerance << ")\n";
    std::cout << "per-entry residuals (" << rep.target_molecule
              << " column, alpha=" << rep.target_alpha << "):\n";
    for (size_t n = 0; n < rep.best_residuals.size(); ++n)
        std::cout << "  n=" << n << "  model=" << fhsc::format9(rep.best_values[n])
                  << "  target=" << fhsc::format9(rep.target[n])
                  << "  residual=" << rep.best_residuals[n] << "\n";
    std::cout << "wrote " << cfg.output_dir << "/calibration.json and "
              << cfg.output_dir << "/mapping.json\n";
    return 0;
}

int cmd_spectrum(const CommonOpts& o) {
    fhsc::RunConfig cfg = load_config(o);
    fhsc::TableMapping mapping = o.mapping_path.empty() ? fhsc::default_bestfit_mapping()
                                                        : load_mapping(o.mapping_path);
    const fhsc::PhysicalConstants& k = mapping.constants();
    std::cout << "# mapping: " << mapping.describe() << "\n";
    std::cout << "molecule,alpha,n,Pn,eps1,eps2,eps3,invQ,lambda_n,lambda_residual,normalizable\n";
    for (const auto& m : select_molecules(cfg, o)) {
        for (double a : cfg.alphas) {
            const fhsc::PotentialParams p = mapping.params(m, a);
            for (int n = 0; n <= cfg.n_max; ++n) {
                const fhsc::SpectrumResult r = fhsc::momentum_eigenvalue(n, p, m.mu, k);
                std::cout << m.name << "," << a << "," << n << "," << fhsc::format9(r.Pn) << ","
                          << r.eps1 << "," << r.eps2 << "," << r.eps3 << "," << r.invQ << ","
                          << r.lambda_n << "," << r.lambda_residual << ","
                          << (r.normalizable ? 1 : 0) << "\n";
            }
        }
    }
    return 0;
}

int cmd_wavefunction(const CommonOpts& o, int level, double t_min, double t_max, int points) {
    fhsc::RunConfig cfg = load_config(o);
    fhsc::TableMapping mapping = o.mapping_path.empty() ? fhsc::default_bestfit_mapping()
                                                        : load_mapping(o.mapping_path);
    const fhsc::PhysicalConstants& k = mapping.constants();
    const std::string name = o.molecule.empty() ? "CO" : o.molecule;
    const fhsc::Molecule m = fhsc::find_molecule(cfg.molecules(), name);
    const double a = cfg.alphas.front();
    const fhsc::PotentialParams p = mapping.params(m, a);
    const fhsc::SpectrumResult r = fhsc::momentum_eigenvalue(level, p, m.mu, k);
    fhsc::WavefunctionSpec spec = fhsc::normalize(fhsc::wavefunction_spec(r, p, m.mu, k));
    if (t_max <= t_min) {
        auto w = fhsc::support_window(spec);
        t_min = w.first;
        t_max = w.second;
    }
    const std::string path = cfg.output_dir + "/wavefunction_" + name + "_n" +
                             std::to_string(level) + "_alpha_" + fhsc::alpha_tag(a) + ".csv";
    fhsc::write_file(path, fhsc::render_wavefunction_csv(cfg, name, spec, t_min, t_max, points));
    std::cout << path << "\n";
    return 0;
}

int cmd_verify(const CommonOpts& o, int oracle_points, int wavefn_levels) {
    fhsc::RunConfig cfg = load_config(o);
    fhsc::TableMapping mapping = o.mapping_path.empty() ? fhsc::default_bestfit_mapping()
                                                        : load_mapping(o.mapping_path);
    const auto mols = select_molecules(cfg, o);
    fhsc::VerifyReport rep =
        fhsc::run_verification(cfg, mapping, mols, oracle_points, wavefn_levels);
    fhsc::write_file(cfg.output_dir + "/verify.json", to_json(rep, cfg).dump(2) + "\n");
    double worst = 0;
    for (const auto& e : rep.entries) worst = std::max(worst, e.rel_err);
    std::cout << "spectrum entries: " << rep.entries.size() << ", worst rel err " << worst
              << " (tolerance " << rep.spectrum_tolerance << ")\n";
    std::cout << "wavefn checks: " << rep.wavefn.size() << "\n";
    std::cout << "wrote " << cfg.output_dir << "/verify.json\n";
    if (!rep.pass) {
        std::cerr << "verify: contract breached\n";
        return 3;
    }
    std::cout << "verify: all contracts hold\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Feinberg-Horodecki quantized momentum spectra: "
                 "Kratzer plus screened-Coulomb potential"};
    app.require_subcommand(1);

    CommonOpts t_opts, f_opts, c_opts, s_opts, w_opts, v_opts;
    std::string figure_name;
    std::string target_path = "data/golden/published_table_alpha_0.001.csv";
    double cal_tolerance = 1e-3;
    int wf_level = 0, wf_points = 400;
    double wf_tmin = 0, wf_tmax = -1;
    int verify_points = 8192, verify_wavefn_levels = 3;

    CLI::App* t = app.add_subcommand("table", "regenerate the momentum tables");
    add_common(t, t_opts);

    CLI::App* f = app.add_subcommand("figure-data", "emit plot data for one figure");
    f->add_option("figure", figure_name,
                  "potential_vs_t | potential_vs_t_alpha | pn_vs_alpha | pn_vs_de | "
                  "kratzer_pn_vs_de | coulomb_pn_vs_alpha")
        ->required();
    add_common(f, f_opts);

    CLI::App* c = app.add_subcommand("calibrate", "search table mappings against a reference");
    c->add_option("--target", target_path, "reference table CSV (the published values)");
    c->add_option("--tolerance", cal_tolerance, "per-entry lock tolerance, eV/c");
    add_common(c, c_opts, false);

    CLI::App* s = app.add_subcommand("spectrum", "print levels with NU intermediates");
    add_common(s, s_opts);

    CLI::App* w = app.add_subcommand("wavefunction", "sample one eigenfunction to CSV");
    w->add_option("--n", wf_level, "level index");
    w->add_option("--tmin", wf_tmin, "sample window start");
    w->add_option("--tmax", wf_tmax, "sample window end");
    w->add_option("--points", wf_points, "sample count");
    add_common(w, w_opts);

    CLI::App* v = app.add_subcommand("verify", "closed form vs eigensolver + wavefn suite");
    v->add_option("--oracle-points", verify_points, "base grid intervals");
    v->add_option("--wavefn-levels", verify_wavefn_levels, "eigenfunction levels per cell");
    add_common(v, v_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (t->parsed()) return cmd_table(t_opts);
        if (f->parsed()) return cmd_figure_data(f_opts, figure_name);
        if (c->parsed()) return cmd_calibrate(c_opts, target_path, cal_tolerance);
        if (s->parsed()) return cmd_spectrum(s_opts);
        if (w->parsed()) return cmd_wavefunction(w_opts, wf_level, wf_tmin, wf_tmax, wf_points);
        if (v->parsed()) return cmd_verify(v_opts, verify_points, verify_wavefn_levels);
    } catch (const fhsc::refinement_failure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 4;
    } catch (const fhsc::contract_breach& e) {
        std::cerr << "contract breach: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
