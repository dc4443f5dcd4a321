// csv.hpp: CSV and JSON-line serialization of tables, trajectories and
// estimation results. All numbers carry 17 significant digits so files
// round-trip binary64 exactly.
#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cohdyn/bath.hpp"
#include "cohdyn/coherence.hpp"
#include "cohdyn/dynamics.hpp"
#include "cohdyn/errors.hpp"
#include "cohdyn/format.hpp"
#include "cohdyn/thermometry.hpp"

namespace cohdyn {

inline void write_rate_table_csv(std::ostream& out, const RateTable& table) {
    out << "t,gamma,re_alpha,im_alpha,Gamma,X\n";
    for (std::size_t k = 0; k < table.size(); ++k)
        out << format_sig17(table.t[k]) << ',' << format_sig17(table.gamma[k])
            << ',' << format_sig17(table.re_alpha[k]) << ','
            << format_sig17(table.im_alpha[k]) << ','
            << format_sig17(table.Gamma[k]) << ',' << format_sig17(table.X[k])
            << '\n';
}

/// One row per grid point: t, then re_ij,im_ij over the upper triangle
/// (i <= j) in row-major order.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << 't';
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j)
            out << ",re_" << i << j << ",im_" << i << j;
    out << '\n';
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        out << format_sig17(traj.t[k]);
        for (int i = 0; i < kDim; ++i)
            for (int j = i; j < kDim; ++j)
                out << ',' << format_sig17(traj.states[k](i, j).real()) << ','
                    << format_sig17(traj.states[k](i, j).imag());
        out << '\n';
    }
}

inline void write_coherence_csv(std::ostream& out,
                                const CoherenceTrajectory& traj) {
    out << "t,c_r\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k)
        out << format_sig17(traj.t[k]) << ',' << format_sig17(traj.c_r[k])
            << '\n';
}

namespace csv_detail {

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace csv_detail

inline void write_rate_table_csv(const std::filesystem::path& path,
                                 const RateTable& table) {
    auto out = csv_detail::open_for_write(path);
    write_rate_table_csv(out, table);
}

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const Trajectory& traj) {
    auto out = csv_detail::open_for_write(path);
    write_trajectory_csv(out, traj);
}

inline void write_coherence_csv(const std::filesystem::path& path,
                                const CoherenceTrajectory& traj) {
    auto out = csv_detail::open_for_write(path);
    write_coherence_csv(out, traj);
}

/// Read a `t,c_r` file back. Grid and values are taken verbatim; no
/// resampling.
inline CoherenceTrajectory read_coherence_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != "t,c_r")
        throw IoError("'" + path.string() + "': expected header 't,c_r'");
    CoherenceTrajectory traj;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string t_text, c_text;
        if (!std::getline(fields, t_text, ',') ||
            !std::getline(fields, c_text))
            throw IoError("'" + path.string() + "': malformed row " +
                          std::to_string(row));
        try {
            traj.t.push_back(std::stod(t_text));
            traj.c_r.push_back(std::stod(c_text));
        } catch (const std::exception&) {
            throw IoError("'" + path.string() + "': malformed row " +
                          std::to_string(row));
        }
    }
    return traj;
}

inline std::string thermometry_json_line(const ThermometryResult& result) {
    std::ostringstream out;
    out << "{\"kt_hat\": " << format_sig17(result.kt_hat)
        << ", \"residual\": " << format_sig17(result.residual)
        << ", \"identifiable\": " << (result.identifiable ? "true" : "false")
        << ", \"sensitivity\": " << format_sig17(result.sensitivity) << "}";
    return out.str();
}

} // namespace cohdyn
