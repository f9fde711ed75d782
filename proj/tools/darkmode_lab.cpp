// darkmode-lab: dark-mode analysis and cooling sweeps for two-component
// bosonic networks.

#include <darkmode_lab/darkmode_lab.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

namespace {

using namespace dmlab;

enum Exit { ok = 0, parse_failure = 2, validation_failure = 3, numerical_failure = 4, enumerate_failure = 5 };

struct Common {
    std::string out;
    unsigned jobs = 1;
    double tol_deg = std::nan("");
    double tol_rank = std::nan("");
    double tol_cpl = std::nan("");

    // Flags win over DARKMODE_LAB_TOL_* which win over the defaults.
    Tolerances tolerances() const {
        Tolerances t = Tolerances::from_env();
        if (!std::isnan(tol_deg)) t.deg = tol_deg;
        if (!std::isnan(tol_rank)) t.rank = tol_rank;
        if (!std::isnan(tol_cpl)) t.cpl = tol_cpl;
        return t;
    }
};

void add_common(CLI::App* sub, Common& c, bool jobs) {
    sub->add_option("--out", c.out, "Write output to this file instead of stdout");
    sub->add_option("--tol-deg", c.tol_deg, "Relative degeneracy tolerance (default 1e-8)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol-rank", c.tol_rank, "Relative singular-value cutoff (default 1e-10)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol-cpl", c.tol_cpl, "Relative zero-coupling cutoff (default 1e-10)")->check(CLI::NonNegativeNumber);
    if (jobs) sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) std::cout << text;
    else jsonio::write_file(c.out, text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Load and validate; a bad spec prints the report and exits 3.
NetworkSpec load_valid(const std::string& path) {
    NetworkSpec s = load_spec(path);
    ValidationReport r = validate_spec(s);
    if (!r.ok()) {
        std::cerr << dump(to_json(r));
        throw InvalidSpec("spec failed validation");
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dark-mode analysis for linear two-component bosonic networks"};
    app.require_subcommand(1);
    Common c;
    std::string spec_path, plan_path, input_path, csv_path;
    int enum_n = 4;
    ConfigParams cp;
    int kappa_count = 13, delta_count = 9;
    double kappa_min = 0.01, kappa_max = 1.0, delta_min = 0.8, delta_max = 1.2;

    auto* analyze = app.add_subcommand("analyze", "Count and construct dark modes (JSON)");
    analyze->add_option("spec", spec_path, "Network spec file")->required();
    add_common(analyze, c, false);

    auto* cool = app.add_subcommand("cool", "Final phonon numbers for one spec (CSV)");
    cool->add_option("spec", spec_path, "Network spec file")->required();
    add_common(cool, c, false);

    auto* sweep = app.add_subcommand("sweep", "Cooling over a 1-D or 2-D parameter grid (CSV)");
    sweep->add_option("spec", spec_path, "Network spec file")->required();
    sweep->add_option("plan", plan_path, "Sweep plan file")->required();
    add_common(sweep, c, true);

    auto* enumerate = app.add_subcommand("enumerate", "Connected one-cavity topologies with verdicts (CSV)");
    enumerate->add_option("N", enum_n, "Number of mechanical modes (1..6)")->required();
    enumerate->add_option("--g", cp.g, "Optomechanical coupling on present edges");
    enumerate->add_option("--eta", cp.eta, "Phonon hopping on present edges");
    enumerate->add_option("--gamma", cp.gamma, "Mechanical damping");
    enumerate->add_option("--nbar", cp.nbar, "Thermal occupation");
    enumerate->add_option("--kappa-min", kappa_min, "Scan: smallest cavity decay");
    enumerate->add_option("--kappa-max", kappa_max, "Scan: largest cavity decay");
    enumerate->add_option("--kappa-count", kappa_count, "Scan: log-spaced kappa points")->check(CLI::PositiveNumber);
    enumerate->add_option("--delta-min", delta_min, "Scan: smallest detuning");
    enumerate->add_option("--delta-max", delta_max, "Scan: largest detuning");
    enumerate->add_option("--delta-count", delta_count, "Scan: linear detuning points")->check(CLI::PositiveNumber);
    add_common(enumerate, c, true);

    auto* chain = app.add_subcommand("chain", "Two mechanical chains on one cavity (JSON)");
    chain->add_option("input", input_path, "Chain spec file")->required();
    chain->add_option("--csv", csv_path, "Also write the cooling row for the chain network to this CSV file");
    add_common(chain, c, false);

    auto* atoms = app.add_subcommand("atoms", "Dark states of a driven multi-level atom (JSON)");
    atoms->add_option("input", input_path, "Atom system file")->required();
    add_common(atoms, c, false);

    auto* dfs = app.add_subcommand("dfs", "Single-excitation dark state of two atoms in a shared bath (JSON)");
    dfs->add_option("input", input_path, "DFS system file")->required();
    add_common(dfs, c, false);

    auto* dumpnf = app.add_subcommand("dump-normal-form", "Normal-mode (arrowhead) form of a spec (JSON)");
    dumpnf->add_option("spec", spec_path, "Network spec file")->required();
    add_common(dumpnf, c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return parse_failure;
    }

    try {
        const Tolerances tol = c.tolerances();
        if (*analyze) {
            NetworkSpec s = load_valid(spec_path);
            emit(c, dump(to_json(count_dark_modes(to_normal_form(s), tol))));
        } else if (*cool) {
            NetworkSpec s = load_valid(spec_path);
            SweepPoint p = evaluate_point(s, tol);
            emit(c, cooling_csv_header(0, s.N) + cooling_csv_row(p, s.N));
        } else if (*sweep) {
            NetworkSpec s = load_valid(spec_path);
            SweepPlan plan = sweep_plan_from_json(jsonio::read_file(plan_path));
            auto pts = run_sweep(s, plan, tol, c.jobs);
            emit(c, sweep_csv(pts, plan.axes.size(), s.N));
        } else if (*enumerate) {
            VerdictScan scan;
            scan.base = cp;
            scan.tol = tol;
            for (int i = 0; i < kappa_count; ++i)
                scan.kappa_grid.push_back(kappa_count == 1 ? kappa_min
                                                           : kappa_min * std::pow(kappa_max / kappa_min, double(i) / (kappa_count - 1)));
            for (int i = 0; i < delta_count; ++i)
                scan.delta_grid.push_back(delta_count == 1 ? delta_min : delta_min + (delta_max - delta_min) * i / (delta_count - 1));
            std::vector<ConfigVerdict> rows;
            try {
                rows = table_of_verdicts(enum_n, scan, c.jobs);
            } catch (const TooLarge& e) {
                std::cerr << "error: " << e.what() << "\n";
                return enumerate_failure;
            } catch (const PreconditionViolated& e) {
                std::cerr << "error: " << e.what() << "\n";
                return enumerate_failure;
            } catch (const Error& e) {
                std::cerr << "error: dynamics failed during enumeration: " << e.what() << "\n";
                return enumerate_failure;
            }
            emit(c, verdicts_csv(rows));
        } else if (*chain) {
            ChainSpec cs = chain_from_json(jsonio::read_file(input_path));
            ChainNetwork net = build_chain_network(cs);
            ChainPrediction p = chain_dark_prediction(cs, tol);
            emit(c, dump(to_json(p, net)));
            if (!csv_path.empty()) {
                SweepPoint pt = evaluate_point(net.spec, tol);
                jsonio::write_file(csv_path, cooling_csv_header(0, net.spec.N) + cooling_csv_row(pt, net.spec.N));
            }
        } else if (*atoms) {
            emit(c, dump(to_json(atom_dark_states(atoms_from_json(jsonio::read_file(input_path)), tol))));
        } else if (*dfs) {
            emit(c, dump(to_json(dfs_single_excitation(dfs_from_json(jsonio::read_file(input_path)), tol))));
        } else if (*dumpnf) {
            NetworkSpec s = load_valid(spec_path);
            emit(c, dump(to_json(to_normal_form(s))));
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parse_failure;
    } catch (const DimensionMismatch& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return validation_failure;
    } catch (const InvalidSpec& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return validation_failure;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return numerical_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical_failure;
    }
    return ok;
}
