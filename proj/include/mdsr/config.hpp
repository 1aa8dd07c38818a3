#pragma once

// Run configuration: key-value config files, figure presets, and the mapping
// onto field/model parameters.
//
// Config format: one `key = value` pair per line, `#` starts a comment.
// Recognized keys (all optional; a preset fills in its figure's parameters
// first, explicit keys then override):
//
//   preset                 fig2 | fig3b1 | fig3b2 | fig3b3 | fig3b4 | fig4a | fig4b
//   scheme                 d1_fp1 | d1_fp2
//   coupling.rabi_mhz      coupling.detuning_mhz    coupling.linewidth_mhz
//   probe.rabi_mhz         probe.linewidth_mhz
//   grid                   start:stop:points (probe detuning, MHz)
//   gamma_ac_mhz           gamma_ab_mhz
//   population_model       fixed | full
//   ground_mixing_rate_mhz
//   atom_density_per_cm3   path_length_mm   probe_wavelength_nm
//   bias_field_gauss
//   output.path            output.format    (csv | json)

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdsr/errors.hpp"
#include "mdsr/liouville.hpp"
#include "mdsr/spectra.hpp"

namespace mdsr {

struct GridSpec {
    double start_mhz = -60.0;
    double stop_mhz = 60.0;
    int points = 2001;
    bool operator==(const GridSpec&) const = default;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
    SchemeId scheme = SchemeId::D1_Fp2;
    double coupling_rabi_mhz = 78.0;
    double coupling_detuning_mhz = 0.0;
    double coupling_linewidth_mhz = 1.5;
    double probe_rabi_mhz = 2.0;
    double probe_linewidth_mhz = 1.5;
    GridSpec grid;
    ModelParams params;
    double bias_field_gauss = 0.0;
    std::string output_path = "spectrum.csv";
    OutputFormat output_format = OutputFormat::Csv;
    std::optional<std::string> preset;

    bool operator==(const RunConfig& o) const {
        return scheme == o.scheme && coupling_rabi_mhz == o.coupling_rabi_mhz &&
               coupling_detuning_mhz == o.coupling_detuning_mhz &&
               coupling_linewidth_mhz == o.coupling_linewidth_mhz &&
               probe_rabi_mhz == o.probe_rabi_mhz &&
               probe_linewidth_mhz == o.probe_linewidth_mhz && grid == o.grid &&
               params.gamma_ac_mhz == o.params.gamma_ac_mhz &&
               params.gamma_ab_mhz == o.params.gamma_ab_mhz &&
               params.population_model == o.params.population_model &&
               params.ground_mixing_rate_mhz == o.params.ground_mixing_rate_mhz &&
               params.atom_density_per_cm3 == o.params.atom_density_per_cm3 &&
               params.path_length_mm == o.params.path_length_mm &&
               params.probe_wavelength_nm == o.params.probe_wavelength_nm &&
               bias_field_gauss == o.bias_field_gauss && output_path == o.output_path &&
               output_format == o.output_format && preset == o.preset;
    }

    std::vector<FieldConfig> fields() const {
        return {FieldConfig::coupling(coupling_rabi_mhz, coupling_detuning_mhz,
                                      coupling_linewidth_mhz),
                FieldConfig::probe(probe_rabi_mhz, 0.0, probe_linewidth_mhz)};
    }

    void validate() const {
        if (coupling_rabi_mhz < 0.0) throw ConfigError("coupling.rabi_mhz must be >= 0");
        if (coupling_linewidth_mhz < 0.0)
            throw ConfigError("coupling.linewidth_mhz must be >= 0");
        if (probe_rabi_mhz < 0.0) throw ConfigError("probe.rabi_mhz must be >= 0");
        if (probe_linewidth_mhz < 0.0) throw ConfigError("probe.linewidth_mhz must be >= 0");
        if (bias_field_gauss < 0.0) throw ConfigError("bias_field_gauss must be >= 0");
        if (grid.points < 3)
            throw ConfigError("grid must have at least 3 points (the group index column "
                              "uses finite differences)");
        if (!(grid.stop_mhz > grid.start_mhz)) throw ConfigError("grid stop must exceed start");
        if (output_path.empty()) throw ConfigError("output.path must not be empty");
        try {
            params.validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig2",   "fig3b1", "fig3b2", "fig3b3",
                                                   "fig3b4", "fig4a",  "fig4b"};
    return names;
}

// Figure presets: Omega_p = 2 MHz, gamma_ab = 40 kHz, gamma_ac = 2.8 MHz,
// linewidths 1.5 MHz, N = 1e11 cm^-3, with Omega_c22 per figure.
inline RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.scheme = SchemeId::D1_Fp2;
    c.probe_rabi_mhz = 2.0;
    c.probe_linewidth_mhz = 1.5;
    c.coupling_detuning_mhz = 0.0;
    c.coupling_linewidth_mhz = 1.5;
    c.params.gamma_ac_mhz = 2.8;
    c.params.gamma_ab_mhz = 0.04;
    c.params.atom_density_per_cm3 = 1e11;
    c.params.population_model = PopulationModel::FixedEqualF1;
    c.grid = GridSpec{};
    c.preset = name;
    if (name == "fig2" || name == "fig3b4" || name == "fig4b")
        c.coupling_rabi_mhz = 78.0;
    else if (name == "fig3b1" || name == "fig4a")
        c.coupling_rabi_mhz = 14.0;
    else if (name == "fig3b2")
        c.coupling_rabi_mhz = 31.0;
    else if (name == "fig3b3")
        c.coupling_rabi_mhz = 56.0;
    else
        throw ConfigError("unknown preset '" + name +
                          "' (expected fig2, fig3b1..fig3b4, fig4a, fig4b)");
    return c;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::string at_line(int line) {
    return line > 0 ? "line " + std::to_string(line) + ": " : "";
}

inline double parse_double(const std::string& v, int line, const std::string& key) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(at_line(line) + "invalid number '" + v + "' for key '" + key + "'");
    }
}

inline int parse_int(const std::string& v, int line, const std::string& key) {
    try {
        size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(at_line(line) + "invalid integer '" + v + "' for key '" + key + "'");
    }
}

inline GridSpec parse_grid(const std::string& v, int line) {
    const auto c1 = v.find(':');
    const auto c2 = v.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError(at_line(line) + "grid must be start:stop:points, got '" + v + "'");
    GridSpec g;
    g.start_mhz = parse_double(trim(v.substr(0, c1)), line, "grid");
    g.stop_mhz = parse_double(trim(v.substr(c1 + 1, c2 - c1 - 1)), line, "grid");
    g.points = parse_int(trim(v.substr(c2 + 1)), line, "grid");
    return g;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline SchemeId parse_scheme_id(const std::string& v) {
    if (v == "d1_fp1") return SchemeId::D1_Fp1;
    if (v == "d1_fp2") return SchemeId::D1_Fp2;
    throw ConfigError("unknown scheme '" + v + "' (expected d1_fp1 or d1_fp2)");
}

// Parses the key-value config text. A preset, if present, is expanded first;
// the remaining keys override it in file order. Unknown keys are rejected.
inline RunConfig parse_config(const std::string& text) {
    struct Pair {
        int line;
        std::string key, value;
    };
    std::vector<Pair> pairs;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        pairs.push_back({line_no, detail::trim(line.substr(0, eq)),
                         detail::trim(line.substr(eq + 1))});
    }

    RunConfig c;
    for (const auto& p : pairs)
        if (p.key == "preset") c = preset_config(p.value);

    for (const auto& p : pairs) {
        const std::string& k = p.key;
        const std::string& v = p.value;
        const int ln = p.line;
        if (k == "preset") continue;
        if (k == "scheme")
            c.scheme = parse_scheme_id(v);
        else if (k == "coupling.rabi_mhz")
            c.coupling_rabi_mhz = detail::parse_double(v, ln, k);
        else if (k == "coupling.detuning_mhz")
            c.coupling_detuning_mhz = detail::parse_double(v, ln, k);
        else if (k == "coupling.linewidth_mhz")
            c.coupling_linewidth_mhz = detail::parse_double(v, ln, k);
        else if (k == "probe.rabi_mhz")
            c.probe_rabi_mhz = detail::parse_double(v, ln, k);
        else if (k == "probe.linewidth_mhz")
            c.probe_linewidth_mhz = detail::parse_double(v, ln, k);
        else if (k == "grid")
            c.grid = detail::parse_grid(v, ln);
        else if (k == "gamma_ac_mhz")
            c.params.gamma_ac_mhz = detail::parse_double(v, ln, k);
        else if (k == "gamma_ab_mhz")
            c.params.gamma_ab_mhz = detail::parse_double(v, ln, k);
        else if (k == "population_model") {
            if (v == "fixed")
                c.params.population_model = PopulationModel::FixedEqualF1;
            else if (v == "full")
                c.params.population_model = PopulationModel::FullPumping;
            else
                throw ConfigError("line " + std::to_string(ln) +
                                  ": population_model must be 'fixed' or 'full'");
        } else if (k == "ground_mixing_rate_mhz")
            c.params.ground_mixing_rate_mhz = detail::parse_double(v, ln, k);
        else if (k == "atom_density_per_cm3")
            c.params.atom_density_per_cm3 = detail::parse_double(v, ln, k);
        else if (k == "path_length_mm")
            c.params.path_length_mm = detail::parse_double(v, ln, k);
        else if (k == "probe_wavelength_nm")
            c.params.probe_wavelength_nm = detail::parse_double(v, ln, k);
        else if (k == "bias_field_gauss")
            c.bias_field_gauss = detail::parse_double(v, ln, k);
        else if (k == "output.path")
            c.output_path = v;
        else if (k == "output.format") {
            if (v == "csv")
                c.output_format = OutputFormat::Csv;
            else if (v == "json")
                c.output_format = OutputFormat::Json;
            else
                throw ConfigError("line " + std::to_string(ln) +
                                  ": output.format must be 'csv' or 'json'");
        } else
            throw ConfigError("line " + std::to_string(ln) + ": unknown key '" + k + "'");
    }

    c.validate();
    return c;
}

// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    if (c.preset) out << "preset = " << *c.preset << "\n";
    out << "scheme = " << (c.scheme == SchemeId::D1_Fp1 ? "d1_fp1" : "d1_fp2") << "\n";
    out << "coupling.rabi_mhz = " << detail::format_double(c.coupling_rabi_mhz) << "\n";
    out << "coupling.detuning_mhz = " << detail::format_double(c.coupling_detuning_mhz) << "\n";
    out << "coupling.linewidth_mhz = " << detail::format_double(c.coupling_linewidth_mhz) << "\n";
    out << "probe.rabi_mhz = " << detail::format_double(c.probe_rabi_mhz) << "\n";
    out << "probe.linewidth_mhz = " << detail::format_double(c.probe_linewidth_mhz) << "\n";
    out << "grid = " << detail::format_double(c.grid.start_mhz) << ":"
        << detail::format_double(c.grid.stop_mhz) << ":" << c.grid.points << "\n";
    out << "gamma_ac_mhz = " << detail::format_double(c.params.gamma_ac_mhz) << "\n";
    out << "gamma_ab_mhz = " << detail::format_double(c.params.gamma_ab_mhz) << "\n";
    out << "population_model = "
        << (c.params.population_model == PopulationModel::FixedEqualF1 ? "fixed" : "full")
        << "\n";
    out << "ground_mixing_rate_mhz = " << detail::format_double(c.params.ground_mixing_rate_mhz)
        << "\n";
    out << "atom_density_per_cm3 = " << detail::format_double(c.params.atom_density_per_cm3)
        << "\n";
    out << "path_length_mm = " << detail::format_double(c.params.path_length_mm) << "\n";
    out << "probe_wavelength_nm = " << detail::format_double(c.params.probe_wavelength_nm)
        << "\n";
    out << "bias_field_gauss = " << detail::format_double(c.bias_field_gauss) << "\n";
    out << "output.path = " << c.output_path << "\n";
    out << "output.format = " << (c.output_format == OutputFormat::Csv ? "csv" : "json") << "\n";
    return out.str();
}

}  // namespace mdsr
