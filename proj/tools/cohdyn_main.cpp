// cohdyn command-line front end: scenario sweeps, figure presets, rate
// tables, temperature estimation and oracle verification.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohdyn/cohdyn.hpp"

namespace {

using namespace cohdyn;

/// Shared state/bath/run options, addressable from the command line and
/// from INI sections [state], [bath], [run].
struct SweepCli {
    std::string state_kind;
    std::optional<double> p;
    std::string environment = "local";
    RunConfig config;
    std::string solver = "both";
    std::string output_dir;

    void attach(CLI::App& cmd, bool state_required) {
        auto* state = cmd.add_option("--state.kind,--state", state_kind,
                                     "Initial state (ghz, w, wbar, wwbar, star, "
                                     "mix-ghz-w, werner-ghz, werner-w)");
        if (state_required) state->required();
        cmd.add_option("--state.p,--p", p, "Mixing weight for mixed kinds");
        cmd.add_option("--bath.env,--env", environment,
                       "Environment topology: local or common");
        cmd.add_option("--bath.eta,--eta", config.eta, "Coupling strength")
            ->capture_default_str();
        cmd.add_option("--bath.lambda,--lambda", config.lambda,
                       "Cutoff frequency")
            ->capture_default_str();
        cmd.add_option("--bath.kt,--kt", config.kT,
                       "Temperature list (hbar omega0 units)");
        cmd.add_option("--run.t-max,--t-max", config.t_max, "Final time")
            ->capture_default_str();
        cmd.add_option("--run.samples,--samples", config.samples,
                       "Grid points including t = 0")
            ->capture_default_str();
        cmd.add_option("--run.solver,--solver", solver,
                       "Solver: analytic, ode, both")
            ->capture_default_str();
        cmd.add_option("--run.output-dir,--output-dir", output_dir,
                       "Output root (default: $COHDYN_OUTPUT_ROOT or ./out)");
        cmd.add_flag("--run.cache,!--no-cache", config.cache,
                     "Reuse cached results (default on)");
        cmd.add_option("--run.ode-substeps,--ode-substeps", config.ode_substeps,
                       "RK4 substeps per grid interval (>= 4)")
            ->capture_default_str();
    }

    RunConfig resolve() {
        config.state.family = parse_state_family(state_kind);
        config.state.p = p;
        config.environment = parse_environment_kind(environment);
        config.solver = parse_solver_choice(solver);
        config.output_dir = output_dir;
        config.validate();
        return config;
    }
};

/// Apply [state]/[bath]/[run] sections of an INI file to every field the
/// command line left unset; explicit flags always win over file values.
void apply_config_file(const std::string& path, const CLI::App& cmd,
                       SweepCli& cli) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(in);
    } catch (const CLI::Error& e) {
        throw ParameterError("config file '" + path + "': " +
                             std::string(e.what()));
    }

    const auto parse_double = [&](const std::string& text,
                                  const std::string& key) {
        try {
            std::size_t used = 0;
            const double value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return value;
        } catch (const std::exception&) {
            throw ParameterError("config file '" + path + "': key '" + key +
                                 "': invalid number '" + text + "'");
        }
    };
    const auto one = [&](const CLI::ConfigItem& item) -> const std::string& {
        if (item.inputs.size() != 1)
            throw ParameterError("config file '" + path + "': key '" +
                                 item.fullname() + "' expects one value");
        return item.inputs.front();
    };
    const auto as_double = [&](const CLI::ConfigItem& item) {
        return parse_double(one(item), item.fullname());
    };
    const auto as_int = [&](const CLI::ConfigItem& item) {
        const double value = parse_double(one(item), item.fullname());
        if (value != std::floor(value) || std::abs(value) > 1e9)
            throw ParameterError("config file '" + path + "': key '" +
                                 item.fullname() + "': expected an integer");
        return static_cast<int>(value);
    };
    const auto as_bool = [&](const CLI::ConfigItem& item) {
        const std::string& text = one(item);
        if (text == "true" || text == "1" || text == "on" || text == "yes")
            return true;
        if (text == "false" || text == "0" || text == "off" || text == "no")
            return false;
        throw ParameterError("config file '" + path + "': key '" +
                             item.fullname() + "': invalid boolean '" + text +
                             "'");
    };
    const auto given = [&](const std::string& flag) {
        return cmd.count(flag) > 0;
    };

    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue; // section markers
        const std::string key = item.fullname();
        if (key == "state.kind") {
            if (!given("--state.kind")) cli.state_kind = one(item);
        } else if (key == "state.p") {
            if (!given("--state.p")) cli.p = as_double(item);
        } else if (key == "bath.env") {
            if (!given("--bath.env")) cli.environment = one(item);
        } else if (key == "bath.eta") {
            if (!given("--bath.eta")) cli.config.eta = as_double(item);
        } else if (key == "bath.lambda") {
            if (!given("--bath.lambda")) cli.config.lambda = as_double(item);
        } else if (key == "bath.kt") {
            if (!given("--bath.kt")) {
                if (item.inputs.empty())
                    throw ParameterError("config file '" + path +
                                         "': key 'bath.kt' expects values");
                cli.config.kT.clear();
                for (const auto& text : item.inputs)
                    cli.config.kT.push_back(parse_double(text, key));
            }
        } else if (key == "run.t-max") {
            if (!given("--run.t-max")) cli.config.t_max = as_double(item);
        } else if (key == "run.samples") {
            if (!given("--run.samples")) cli.config.samples = as_int(item);
        } else if (key == "run.solver") {
            if (!given("--run.solver")) cli.solver = one(item);
        } else if (key == "run.output-dir") {
            if (!given("--run.output-dir")) cli.output_dir = one(item);
        } else if (key == "run.cache") {
            if (!given("--run.cache")) cli.config.cache = as_bool(item);
        } else if (key == "run.ode-substeps") {
            if (!given("--run.ode-substeps"))
                cli.config.ode_substeps = as_int(item);
        } else {
            throw ParameterError("config file '" + path + "': unknown key '" +
                                 key + "'");
        }
    }
}

void print_report(const RunReport& report) {
    for (const auto& cell : report.cells) {
        for (const auto& [tag, path] : cell.files)
            std::cout << "wrote " << path.string() << "\n";
        if (cell.cross_check)
            std::cout << "  kT = " << run_detail::format_compact(cell.kT)
                      << ": max |C_R(ode) - C_R(analytic)| = "
                      << *cell.cross_check << "\n";
    }
    if (report.total_cache_hits() > 0)
        std::cout << report.total_cache_hits() << " cache hit(s)\n";
}

void emit_sweep_plot(const RunConfig& config, const RunReport& report,
                     const std::string& label) {
    // One curve per kT; prefer the analytic series when both exist.
    std::vector<std::pair<std::string, std::filesystem::path>> series;
    for (const auto& cell : report.cells) {
        const auto preferred = std::find_if(
            cell.files.begin(), cell.files.end(),
            [](const auto& f) { return f.first == SolverTag::Analytic; });
        const auto& file =
            preferred != cell.files.end() ? *preferred : cell.files.front();
        series.emplace_back("kT = " + run_detail::format_compact(cell.kT),
                            file.second);
    }
    const auto script = emit_plot_script(series, label, report.output_root);
    std::cout << "wrote " << script.string() << "\n";
}

int command_run(SweepCli& cli) {
    const RunConfig config = cli.resolve();
    const RunReport report = run(config);
    print_report(report);
    emit_sweep_plot(config, report,
                    state_file_token(config.state) + "_" +
                        to_string(config.environment));
    return 0;
}

int command_preset(const std::string& name, SweepCli& overrides,
                   CLI::App& cmd) {
    RunConfig config = figure_preset(name);
    if (cmd.count("--solver")) config.solver = parse_solver_choice(overrides.solver);
    if (cmd.count("--output-dir")) config.output_dir = overrides.output_dir;
    if (cmd.count("--t-max")) config.t_max = overrides.config.t_max;
    if (cmd.count("--samples")) config.samples = overrides.config.samples;
    if (cmd.count("--ode-substeps"))
        config.ode_substeps = overrides.config.ode_substeps;
    if (cmd.count("--no-cache")) config.cache = overrides.config.cache;
    config.validate();
    const RunReport report = run(config);
    print_report(report);
    emit_sweep_plot(config, report, name);
    return 0;
}

int command_estimate(const std::string& observed_path, SweepCli& cli,
                     double kt_lo, double kt_hi,
                     const std::string& output_path) {
    const CoherenceTrajectory observed = read_coherence_csv(observed_path);

    Scenario model;
    model.initial.family = parse_state_family(cli.state_kind);
    model.initial.p = cli.p;
    const BathSpec bath{cli.config.eta, cli.config.lambda, kt_lo};
    model.environment = parse_environment_kind(cli.environment) ==
                                EnvironmentKind::Local
                            ? Environment::local(bath)
                            : Environment::common(bath);
    model.t_grid = observed.t;
    model.validate();

    const ThermometryResult result =
        estimate_temperature(observed, model, TemperatureBounds{kt_lo, kt_hi});
    const std::string line = thermometry_json_line(result);
    std::cout << line << "\n";
    if (result.boundary_warning)
        std::cerr << "warning: estimate sits at a search bound; "
                     "widen [--kt-lo, --kt-hi]\n";
    if (!output_path.empty()) {
        std::ofstream out(output_path);
        if (!out)
            throw IoError("cannot open '" + output_path + "' for writing");
        out << line << "\n";
    }
    return 0;
}

int command_rates(double kt, double eta, double lambda, double t_max,
                  int samples, const std::string& output_path) {
    const BathSpec spec{eta, lambda, kt};
    spec.validate();
    if (samples < 2)
        throw ParameterError("config field 'samples': must be >= 2");
    if (!(t_max > 0.0))
        throw ParameterError("config field 't_max': must be positive");
    std::vector<double> grid(samples);
    const double h = t_max / (samples - 1);
    for (int k = 0; k < samples; ++k) grid[k] = k * h;
    const RateTable table = build_rate_table(spec, grid);
    if (output_path.empty()) {
        write_rate_table_csv(std::cout, table);
    } else {
        write_rate_table_csv(std::filesystem::path(output_path), table);
        std::cout << "wrote " << output_path << "\n";
    }
    return 0;
}

struct VerifyCheck {
    std::string name;
    double deviation;
    double tolerance;
    bool pass() const { return deviation <= tolerance; }
};

/// Quadrature vs closed-form oracles plus internal consistency of the
/// tabulated rates, at the given coupling parameters.
int command_verify(double eta, double lambda, double t_max, int samples) {
    if (samples < 3)
        throw ParameterError("config field 'samples': must be >= 3");
    if (!(t_max > 0.0))
        throw ParameterError("config field 't_max': must be positive");
    // The cumulative columns and the finite-difference consistency check
    // carry O((lambda h)^2) discretization error of their own; refine the
    // grid so that error sits well below the tolerances being enforced.
    const double h_cap = 2.5e-4 / lambda;
    if (t_max / (samples - 1) > h_cap)
        samples = static_cast<int>(std::ceil(t_max / h_cap)) + 1;
    std::vector<double> grid(samples);
    const double h = t_max / (samples - 1);
    for (int k = 0; k < samples; ++k) grid[k] = k * h;

    std::vector<VerifyCheck> checks;
    const auto rel = [](double got, double want) {
        return std::abs(got - want) / std::max(std::abs(want), 1e-30);
    };

    const BathSpec cold{eta, lambda, 0.0};
    const RateTable cold_table = build_rate_table(cold, grid);
    double dev_gamma = 0.0, dev_exponent = 0.0, dev_im = 0.0, dev_x = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double t = grid[k];
        dev_gamma = std::max(
            dev_gamma,
            rel(cold_table.gamma[k], closed_form::zero_temperature_gamma(t, cold)));
        dev_exponent = std::max(
            dev_exponent, rel(cold_table.Gamma[k],
                              closed_form::zero_temperature_exponent(t, cold)));
        dev_im = std::max(
            dev_im, rel(cold_table.im_alpha[k], closed_form::im_alpha(t, cold)));
        dev_x = std::max(
            dev_x, rel(cold_table.X[k], closed_form::phase_accumulator(t, cold)));
    }
    checks.push_back({"kT=0 gamma closed form", dev_gamma, 1e-6});
    checks.push_back({"kT=0 Gamma closed form", dev_exponent, 1e-6});
    checks.push_back({"Im alpha closed form", dev_im, 1e-6});
    checks.push_back({"X closed form", dev_x, 1e-6});

    const BathSpec hot{eta, lambda, 10.0};
    const RateTable hot_table = build_rate_table(hot, grid);
    double dev_hot = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k)
        dev_hot = std::max(dev_hot,
                           rel(hot_table.gamma[k],
                               closed_form::high_temperature_gamma(grid[k], hot)));
    checks.push_back({"kT=10 high-T asymptote", dev_hot, 5e-3});

    double dev_half = 0.0;
    double max_gamma = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        max_gamma = std::max(max_gamma, std::abs(hot_table.gamma[k]));
        if (k > 0)
            dev_half = std::max(dev_half, rel(hot_table.re_alpha[k],
                                              0.5 * hot_table.gamma[k]));
    }
    checks.push_back({"Re alpha = gamma/2", dev_half, 1e-9});

    double dev_central = 0.0;
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        const double slope =
            (hot_table.Gamma[k + 1] - hot_table.Gamma[k - 1]) / (2.0 * h);
        dev_central = std::max(dev_central, std::abs(slope - hot_table.gamma[k]));
    }
    checks.push_back(
        {"central difference dGamma/dt = gamma", dev_central, 1e-6 * max_gamma});

    double min_gamma = 0.0;
    for (double kt : {0.1, 0.2, 0.5, 2.0, 10.0}) {
        const RateTable table = build_rate_table(BathSpec{eta, lambda, kt}, grid);
        for (double g : table.gamma) min_gamma = std::min(min_gamma, g);
    }
    checks.push_back({"gamma nonnegative (paper kT set)", -min_gamma, 1e-12});

    bool all_pass = true;
    for (const auto& check : checks) {
        all_pass = all_pass && check.pass();
        std::cout << (check.pass() ? "PASS" : "FAIL") << "  " << check.name
                  << "  (deviation " << check.deviation << ", tolerance "
                  << check.tolerance << ")\n";
    }
    if (!all_pass)
        throw NumericalError("verification failed; see check list above");
    std::cout << "all checks passed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coherence dynamics of three dephasing qubits: sweeps, "
                 "figure presets, rate tables, thermometry"};
    app.require_subcommand(1);
    int exit_code = 0;

    auto* run_cmd =
        app.add_subcommand("run", "Run a configured scenario sweep");
    auto run_cli = std::make_shared<SweepCli>();
    auto run_config_path = std::make_shared<std::string>();
    run_cli->attach(*run_cmd, /*state_required=*/false);
    run_cmd->add_option("--config", *run_config_path,
                        "INI file with [state], [bath], [run] sections; "
                        "flags override file values");
    run_cmd->callback([run_cli, run_config_path, run_cmd, &exit_code] {
        if (!run_config_path->empty())
            apply_config_file(*run_config_path, *run_cmd, *run_cli);
        if (run_cli->state_kind.empty())
            throw ParameterError("config field 'state.kind': required");
        exit_code = command_run(*run_cli);
    });

    auto* preset_cmd =
        app.add_subcommand("preset", "Reproduce a published figure panel");
    auto preset_name = std::make_shared<std::string>();
    auto preset_cli = std::make_shared<SweepCli>();
    auto list_flag = std::make_shared<bool>(false);
    preset_cmd->add_option("name", *preset_name,
                           "Preset name, e.g. fig2a or fig5i");
    preset_cmd->add_flag("--list", *list_flag, "List available presets");
    preset_cli->attach(*preset_cmd, /*state_required=*/false);
    preset_cmd->callback([preset_name, preset_cli, list_flag, preset_cmd,
                          &exit_code] {
        if (*list_flag) {
            for (const auto& name : preset_names()) std::cout << name << "\n";
            exit_code = 0;
            return;
        }
        if (preset_name->empty())
            throw ParameterError("preset: name required (or use --list)");
        exit_code = command_preset(*preset_name, *preset_cli, *preset_cmd);
    });

    auto* est_cmd = app.add_subcommand(
        "estimate-temp", "Estimate reservoir temperature from a C_R series");
    auto est_cli = std::make_shared<SweepCli>();
    auto observed = std::make_shared<std::string>();
    auto kt_lo = std::make_shared<double>(0.01);
    auto kt_hi = std::make_shared<double>(100.0);
    auto est_out = std::make_shared<std::string>();
    est_cmd->add_option("--observed", *observed, "Observed t,c_r CSV file")
        ->required();
    est_cli->attach(*est_cmd, /*state_required=*/true);
    est_cmd->add_option("--kt-lo", *kt_lo, "Lower search bound")
        ->capture_default_str();
    est_cmd->add_option("--kt-hi", *kt_hi, "Upper search bound")
        ->capture_default_str();
    est_cmd->add_option("--output", *est_out, "Also write the JSON line here");
    est_cmd->callback([est_cli, observed, kt_lo, kt_hi, est_out, &exit_code] {
        exit_code =
            command_estimate(*observed, *est_cli, *kt_lo, *kt_hi, *est_out);
    });

    auto* rates_cmd =
        app.add_subcommand("rates", "Dump the dephasing rate table as CSV");
    auto rates_kt = std::make_shared<double>();
    auto rates_eta = std::make_shared<double>(0.1);
    auto rates_lambda = std::make_shared<double>(0.01);
    auto rates_tmax = std::make_shared<double>(200.0);
    auto rates_samples = std::make_shared<int>(2001);
    auto rates_out = std::make_shared<std::string>();
    rates_cmd->add_option("--kt", *rates_kt, "Temperature")->required();
    rates_cmd->add_option("--eta", *rates_eta, "Coupling strength")
        ->capture_default_str();
    rates_cmd->add_option("--lambda", *rates_lambda, "Cutoff frequency")
        ->capture_default_str();
    rates_cmd->add_option("--t-max", *rates_tmax, "Final time")
        ->capture_default_str();
    rates_cmd->add_option("--samples", *rates_samples, "Grid points")
        ->capture_default_str();
    rates_cmd->add_option("--output", *rates_out, "CSV path (default stdout)");
    rates_cmd->callback([rates_kt, rates_eta, rates_lambda, rates_tmax,
                         rates_samples, rates_out, &exit_code] {
        exit_code = command_rates(*rates_kt, *rates_eta, *rates_lambda,
                                  *rates_tmax, *rates_samples, *rates_out);
    });

    auto* verify_cmd = app.add_subcommand(
        "verify", "Cross-check quadrature against closed-form oracles");
    auto verify_eta = std::make_shared<double>(0.1);
    auto verify_lambda = std::make_shared<double>(0.01);
    auto verify_tmax = std::make_shared<double>(200.0);
    auto verify_samples = std::make_shared<int>(201);
    verify_cmd->add_option("--eta", *verify_eta, "Coupling strength")
        ->capture_default_str();
    verify_cmd->add_option("--lambda", *verify_lambda, "Cutoff frequency")
        ->capture_default_str();
    verify_cmd->add_option("--t-max", *verify_tmax, "Final time")
        ->capture_default_str();
    verify_cmd->add_option("--samples", *verify_samples,
                           "Grid points (coarse requests are refined so "
                           "discretization error stays below the tolerances)")
        ->capture_default_str();
    verify_cmd->callback([verify_eta, verify_lambda, verify_tmax,
                          verify_samples, &exit_code] {
        exit_code = command_verify(*verify_eta, *verify_lambda, *verify_tmax,
                                   *verify_samples);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
