// runner.hpp: sweep execution: one coherence CSV per (kT, solver), with a
// content-addressed cache and a plot-script emitter.
#pragma once

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cohdyn/coherence.hpp"
#include "cohdyn/config.hpp"
#include "cohdyn/csv.hpp"
#include "cohdyn/dynamics.hpp"
#include "cohdyn/errors.hpp"

namespace cohdyn {

/// Folded into every cache key so stale physics is never reused across
/// code changes that alter numerical output.
inline constexpr const char* kCodeVersionTag = "cohdyn-1";

namespace run_detail {

/// Compact value rendering for file names: enough digits to keep distinct
/// sweep values distinct, without the full 17-digit tail.
inline std::string format_compact(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline std::string hex_digest(std::uint64_t key) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(key));
    return buf;
}

} // namespace run_detail

/// State token used in output names; mixtures carry their weight.
inline std::string state_file_token(const StateSpec& state) {
    std::string token = to_string(state.family);
    if (state.p) token += "-p" + run_detail::format_compact(*state.p);
    return token;
}

inline std::string output_file_name(const StateSpec& state,
                                    EnvironmentKind environment, double kT,
                                    SolverTag solver) {
    return state_file_token(state) + "_" + to_string(environment) + "_kT" +
           run_detail::format_compact(kT) + "_" + to_string(solver) + ".csv";
}

struct RunCell {
    double kT = 0.0;
    std::vector<std::pair<SolverTag, std::filesystem::path>> files;
    int cache_hits = 0;
    // Max |C_R(ode) - C_R(analytic)| over the grid, when both were run.
    std::optional<double> cross_check;
};

struct RunReport {
    std::filesystem::path output_root;
    std::vector<RunCell> cells;

    std::vector<std::filesystem::path> all_files() const {
        std::vector<std::filesystem::path> files;
        for (const auto& cell : cells)
            for (const auto& [tag, path] : cell.files) files.push_back(path);
        return files;
    }

    int total_cache_hits() const {
        int hits = 0;
        for (const auto& cell : cells) hits += cell.cache_hits;
        return hits;
    }
};

namespace run_detail {

inline void copy_bytes(const std::filesystem::path& from,
                       const std::filesystem::path& to) {
    std::error_code ec;
    std::filesystem::copy_file(
        from, to, std::filesystem::copy_options::overwrite_existing, ec);
    if (ec)
        throw IoError("cannot copy '" + from.string() + "' to '" +
                      to.string() + "': " + ec.message());
}

inline RunCell run_cell(const RunConfig& config, double kT,
                        const std::filesystem::path& root,
                        const std::filesystem::path& cache_dir) {
    RunCell cell;
    cell.kT = kT;
    const Scenario scenario = config.scenario_for(kT);
    const std::string canonical = scenario.canonical_text();

    std::vector<SolverTag> solvers;
    if (config.solver != SolverChoice::Ode) solvers.push_back(SolverTag::Analytic);
    if (config.solver != SolverChoice::Analytic) solvers.push_back(SolverTag::Ode);

    std::vector<RateTable> tables; // built lazily, shared by both solvers
    for (SolverTag tag : solvers) {
        const std::filesystem::path target =
            root / output_file_name(config.state, config.environment, kT, tag);
        std::string key_text = canonical + ";solver=" + to_string(tag) +
                               ";version=" + kCodeVersionTag;
        if (tag == SolverTag::Ode)
            key_text += ";substeps=" + std::to_string(config.ode_substeps);
        const std::filesystem::path cached =
            cache_dir / (hex_digest(fnv1a64(key_text)) + ".csv");

        if (config.cache && std::filesystem::exists(cached)) {
            copy_bytes(cached, target);
            ++cell.cache_hits;
        } else {
            if (tables.empty()) tables = build_scenario_tables(scenario);
            OdeOptions ode_options;
            ode_options.substeps = config.ode_substeps;
            const Trajectory traj =
                tag == SolverTag::Analytic
                    ? propagate_analytic(scenario, tables)
                    : propagate_ode(scenario, tables, ode_options);
            write_coherence_csv(target, coherence_of(traj));
            if (config.cache) copy_bytes(target, cached);
        }
        cell.files.emplace_back(tag, target);
    }

    if (cell.files.size() == 2) {
        const CoherenceTrajectory a = read_coherence_csv(cell.files[0].second);
        const CoherenceTrajectory b = read_coherence_csv(cell.files[1].second);
        double max_dev = 0.0;
        for (std::size_t k = 0; k < a.c_r.size(); ++k)
            max_dev = std::max(max_dev, std::abs(a.c_r[k] - b.c_r[k]));
        cell.cross_check = max_dev;
    }
    return cell;
}

} // namespace run_detail

/// Execute a sweep. Cells (one per kT) are independent and run on a bounded
/// worker pool; outputs and the report ordering are deterministic.
inline RunReport run(const RunConfig& config) {
    config.validate();
    const std::filesystem::path root = resolve_output_root(config);
    const std::filesystem::path cache_dir = root / ".cache";
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec)
        throw IoError("cannot create output directory '" + root.string() +
                      "': " + ec.message());
    if (config.cache) {
        std::filesystem::create_directories(cache_dir, ec);
        if (ec)
            throw IoError("cannot create cache directory '" +
                          cache_dir.string() + "': " + ec.message());
    }

    RunReport report;
    report.output_root = root;
    report.cells.resize(config.kT.size());

    std::vector<std::exception_ptr> failures(config.kT.size());
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, hw), config.kT.size());

    const auto worker = [&] {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= config.kT.size()) return;
            try {
                report.cells[index] = run_detail::run_cell(
                    config, config.kT[index], root, cache_dir);
            } catch (...) {
                failures[index] = std::current_exception();
            }
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }

    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);
    return report;
}

/// Write a self-contained Python script that renders C_R vs omega0 t with
/// one labeled curve per series. Overwrites deterministically.
inline std::filesystem::path emit_plot_script(
    const std::vector<std::pair<std::string, std::filesystem::path>>& series,
    const std::string& label, const std::filesystem::path& directory) {
    for (const auto& [name, path] : series)
        if (!std::filesystem::exists(path))
            throw IoError("plot script: missing CSV '" + path.string() + "'");

    const std::filesystem::path script = directory / ("plot_" + label + ".py");
    std::ofstream out(script);
    if (!out)
        throw IoError("cannot open '" + script.string() + "' for writing");
    out << "#!/usr/bin/env python3\n"
        << "\"\"\"Render " << label << ": C_R vs omega0*t, one curve per series.\"\"\"\n"
        << "import csv\n"
        << "from pathlib import Path\n\n"
        << "import matplotlib\n"
        << "matplotlib.use(\"Agg\")\n"
        << "import matplotlib.pyplot as plt\n\n"
        << "HERE = Path(__file__).resolve().parent\n"
        << "SERIES = [\n";
    for (const auto& [name, path] : series)
        out << "    (\"" << name << "\", \"" << path.filename().string()
            << "\"),\n";
    out << "]\n\n"
        << "fig, ax = plt.subplots(figsize=(6.4, 4.2))\n"
        << "for label, filename in SERIES:\n"
        << "    with (HERE / filename).open() as fh:\n"
        << "        rows = list(csv.reader(fh))[1:]\n"
        << "    ax.plot([float(r[0]) for r in rows], [float(r[1]) for r in rows],\n"
        << "            label=label)\n"
        << "ax.set_xlabel(r\"$\\omega_0 t$\")\n"
        << "ax.set_ylabel(r\"$C_R(\\rho)$\")\n"
        << "ax.set_title(\"" << label << "\")\n"
        << "ax.legend()\n"
        << "fig.tight_layout()\n"
        << "fig.savefig(HERE / \"" << label << ".png\", dpi=160)\n";
    return script;
}

} // namespace cohdyn
