// spectra: energy sweeps, population dynamics and the invariant suite from the command line.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spectra/spectra.hpp"

namespace fs = std::filesystem;
using namespace spectra;

namespace {

const std::map<std::string, std::string>& key_help() {
    static const std::map<std::string, std::string> help{
        {"model", "rabi (omega0, Omega, lambda) or ion (Omega0, nu, g, epsilon)"},
        {"omega0", "boson frequency"},
        {"Omega", "spin splitting"},
        {"lambda", "spin-boson coupling (dynamics with model=rabi)"},
        {"Omega0", "ion Rabi frequency"},
        {"nu", "ion trap frequency"},
        {"g", "ion coupling in units of nu (dynamics with model=ion)"},
        {"epsilon", "ion detuning; only 0 is supported"},
        {"orders", "comma list drawn from 0,1,2,3,exact"},
        {"levels", "number of lowest levels written per grid point"},
        {"sweep", "sweep variable; lambda_over_omega0"},
        {"sweep_start", "first grid value"},
        {"sweep_stop", "last grid value (inclusive when on the grid)"},
        {"sweep_step", "grid spacing"},
        {"N", "initial sector truncation; grows until dropped couplings fall below tolerance"},
        {"K", "Fock cutoff for eigenvector reconstruction, 0 = automatic"},
        {"tolerance", "bound on dropped off-diagonal couplings"},
        {"alpha", "coherent amplitude, real part"},
        {"alpha_im", "coherent amplitude, imaginary part"},
        {"spin", "initial spin state: lower or upper"},
        {"frame", "spin readout basis: sigma_z or sigma_x"},
        {"horizon", "final time in units of 1/omega0 (1/nu for ion runs)"},
        {"samples", "number of time samples on [0, horizon]"},
        {"max_gram_deviation", "reject block eigenvector sets overlapping by more than this"},
        {"output", "CSV path; relative paths resolve against SPECTRA_OUT_DIR"},
        {"plot_script", "also write a gnuplot script next to the CSV"},
        {"threads", "sweep workers, 0 = one per core"},
    };
    return help;
}

struct ConfigFlags {
    std::string file;
    std::map<std::string, std::string> values;
    bool print_config = false;
};

void add_config_flags(CLI::App* app, ConfigFlags& flags) {
    app->add_option("--config", flags.file, "key=value configuration file")->check(CLI::ExistingFile);
    app->add_flag("--print-config", flags.print_config, "print the resolved configuration and exit");
    for (auto key : config_keys()) {
        const std::string k(key);
        app->add_option("--" + k, flags.values[k], key_help().at(k))->group("Configuration keys");
    }
}

// default < file < flags
RunConfig resolve(const CLI::App* app, const ConfigFlags& flags) {
    RunConfig config;
    if (!flags.file.empty()) config = load_config(flags.file);
    for (const auto& [key, value] : flags.values) {
        if (app->count("--" + key) > 0) config.set(key, value);
    }
    config.validate();
    return config;
}

fs::path output_path(const RunConfig& config, const std::string& default_name) {
    fs::path out = config.output.empty() ? fs::path(default_name) : fs::path(config.output);
    if (out.is_relative()) {
        if (const char* dir = std::getenv("SPECTRA_OUT_DIR"); dir && *dir) out = fs::path(dir) / out;
    }
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    f << text;
    f.close();
    if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

int cmd_sweep(const RunConfig& config) {
    const auto result = run_sweep(config);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::ostringstream csv;
    write_sweep_csv(csv, result.rows);
    const auto path = output_path(config, "sweep.csv");
    write_file(path, csv.str());
    std::cout << "wrote " << path.string() << " (" << result.rows.size() << " rows)\n";
    if (config.plot_script) {
        auto script = path;
        script.replace_extension(".gp");
        write_file(script, sweep_plot_script(path.filename().string(), config.orders, config.levels));
        std::cout << "wrote " << script.string() << '\n';
    }
    return 0;
}

int cmd_dynamics(const RunConfig& config) {
    const auto result = run_dynamics(config);
    std::ostringstream csv;
    write_dynamics_csv(csv, result.columns);
    const auto path = output_path(config, "dynamics.csv");
    write_file(path, csv.str());
    std::cout << "wrote " << path.string() << " (" << result.columns.t.size() << " samples, "
              << result.mapping.frame.describe() << ", N = " << result.comparison.exact.N
              << ", K = " << result.comparison.exact.K << ")\n";
    for (const auto& r : result.comparison.reports) {
        std::cout << "order " << to_string(r.method) << ": max |dP| = " << format_double(r.max_abs_diff)
                  << ", first |dP| > " << format_double(r.threshold) << " at t = "
                  << (r.first_exceed_time ? format_double(*r.first_exceed_time) : std::string("never"))
                  << ", eigenvector overlap " << format_double(r.gram_deviation) << '\n';
    }
    if (config.plot_script) {
        auto script = path;
        script.replace_extension(".gp");
        write_file(script, dynamics_plot_script(path.filename().string(), "lower-level population"));
        std::cout << "wrote " << script.string() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-boson spectra and dynamics in the displaced Fock basis"};
    app.require_subcommand(1);

    ConfigFlags sweep_flags, dynamics_flags;
    auto* sweep = app.add_subcommand("sweep", "energy levels over a lambda/omega0 grid, written as CSV");
    add_config_flags(sweep, sweep_flags);
    auto* dynamics = app.add_subcommand("dynamics", "exact, order-1 and order-3 population traces, written as CSV");
    add_config_flags(dynamics, dynamics_flags);

    bool full = false;
    std::string fault = "none";
    auto* validate = app.add_subcommand("validate", "run the invariant suite; exit status 0 iff all pass");
    validate->add_flag("--full", full, "include oracle convergence, long-horizon and propagator checks");
    validate->add_option("--inject-fault", fault, "deliberately corrupt a computation (overlap-sign)")
        ->check(CLI::IsMember({"none", "overlap-sign"}))
        ->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed() || dynamics->parsed()) {
            const bool is_sweep = sweep->parsed();
            const auto config = resolve(is_sweep ? sweep : dynamics, is_sweep ? sweep_flags : dynamics_flags);
            if ((is_sweep ? sweep_flags : dynamics_flags).print_config) {
                std::cout << serialize(config);
                return 0;
            }
            return is_sweep ? cmd_sweep(config) : cmd_dynamics(config);
        }
        ValidateOptions options;
        options.full = full;
        options.fault = fault == "overlap-sign" ? Fault::overlap_sign : Fault::none;
        const auto report = run_validation(options);
        std::cout << format_report(report);
        return report.passed() ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
