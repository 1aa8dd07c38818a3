#pragma once

// Sweep orchestration and serialization of spectra to CSV/JSON.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "mdsr/config.hpp"
#include "mdsr/errors.hpp"
#include "mdsr/spectra.hpp"

namespace mdsr {

struct RunResult {
    SusceptibilitySpectrum spectrum;
    WindowReport windows;
};

inline RunResult compute_run(const RunConfig& config) {
    config.validate();
    const LevelScheme scheme = build_scheme(config.scheme, config.bias_field_gauss);
    const DipoleTable dipoles = dipole_table(scheme);
    const auto grid = make_grid(config.grid.start_mhz, config.grid.stop_mhz, config.grid.points);
    RunResult result;
    result.spectrum = sweep_spectrum(scheme, dipoles, config.fields(), config.params, grid);
    result.windows = find_windows(result.spectrum);
    return result;
}

namespace detail {

// Fixed 9-significant-digit formatting keeps output files byte-identical
// across runs and platforms.
inline std::string format_g9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace detail

inline std::string to_csv(const SusceptibilitySpectrum& s) {
    std::string out;
    out.reserve(s.grid_mhz.size() * 140 + 128);
    out += "delta_p_mhz,re_chi1,im_chi1,re_chi2,im_chi2,re_chi3,im_chi3,re_chi,im_chi,"
           "transmission,group_index\n";
    for (size_t i = 0; i < s.grid_mhz.size(); ++i) {
        out += detail::format_g9(s.grid_mhz[i]);
        for (const auto* col : {&s.chi1, &s.chi2, &s.chi3, &s.chi_total}) {
            out += ',';
            out += detail::format_g9((*col)[i].real());
            out += ',';
            out += detail::format_g9((*col)[i].imag());
        }
        out += ',';
        out += detail::format_g9(s.transmission[i]);
        out += ',';
        out += detail::format_g9(s.group_index.empty() ? 1.0 : s.group_index[i]);
        out += '\n';
    }
    return out;
}

inline nlohmann::json meta_json(const RunConfig& c) {
    nlohmann::json meta;
    if (c.preset) meta["preset"] = *c.preset;
    meta["scheme"] = c.scheme == SchemeId::D1_Fp1 ? "d1_fp1" : "d1_fp2";
    meta["coupling_rabi_mhz"] = c.coupling_rabi_mhz;
    meta["coupling_detuning_mhz"] = c.coupling_detuning_mhz;
    meta["coupling_linewidth_mhz"] = c.coupling_linewidth_mhz;
    meta["probe_rabi_mhz"] = c.probe_rabi_mhz;
    meta["probe_linewidth_mhz"] = c.probe_linewidth_mhz;
    meta["grid_start_mhz"] = c.grid.start_mhz;
    meta["grid_stop_mhz"] = c.grid.stop_mhz;
    meta["grid_points"] = c.grid.points;
    meta["gamma_ac_mhz"] = c.params.gamma_ac_mhz;
    meta["gamma_ab_mhz"] = c.params.gamma_ab_mhz;
    meta["population_model"] =
        c.params.population_model == PopulationModel::FixedEqualF1 ? "fixed" : "full";
    meta["ground_mixing_rate_mhz"] = c.params.ground_mixing_rate_mhz;
    meta["atom_density_per_cm3"] = c.params.atom_density_per_cm3;
    meta["path_length_mm"] = c.params.path_length_mm;
    meta["probe_wavelength_nm"] = c.params.probe_wavelength_nm;
    meta["bias_field_gauss"] = c.bias_field_gauss;
    return meta;
}

inline std::string to_json(const RunConfig& config, const RunResult& result) {
    const SusceptibilitySpectrum& s = result.spectrum;
    nlohmann::json j;
    j["meta"] = meta_json(config);
    auto put = [&](const char* re_name, const char* im_name, const std::vector<Complex>& col) {
        std::vector<double> re(col.size()), im(col.size());
        for (size_t i = 0; i < col.size(); ++i) {
            re[i] = col[i].real();
            im[i] = col[i].imag();
        }
        j[re_name] = re;
        j[im_name] = im;
    };
    j["delta_p_mhz"] = s.grid_mhz;
    put("re_chi1", "im_chi1", s.chi1);
    put("re_chi2", "im_chi2", s.chi2);
    put("re_chi3", "im_chi3", s.chi3);
    put("re_chi", "im_chi", s.chi_total);
    j["transmission"] = s.transmission;
    j["group_index"] = s.group_index;
    j["window_count"] = result.windows.window_count;
    return j.dump(2) + "\n";
}

inline std::string summary_text(const RunConfig& config, const RunResult& result) {
    std::ostringstream out;
    out << "scheme " << (config.scheme == SchemeId::D1_Fp1 ? "d1_fp1" : "d1_fp2")
        << ", coupling " << detail::format_g9(config.coupling_rabi_mhz) << " MHz, probe "
        << detail::format_g9(config.probe_rabi_mhz) << " MHz, gamma_ac "
        << detail::format_g9(config.params.gamma_ac_mhz) << " MHz, gamma_ab "
        << detail::format_g9(config.params.gamma_ab_mhz) << " MHz, linewidths "
        << detail::format_g9(config.probe_linewidth_mhz) << "/"
        << detail::format_g9(config.coupling_linewidth_mhz) << " MHz, N "
        << detail::format_g9(config.params.atom_density_per_cm3) << " cm^-3\n";
    out << "window_count = " << result.windows.window_count << "\n";
    out << "absorption peaks (MHz, Im chi):";
    for (const auto& p : result.windows.absorption_peaks)
        out << " (" << detail::format_g9(p.delta_p_mhz) << ", " << detail::format_g9(p.value)
            << ")";
    out << "\ntransparency minima (MHz, Im chi):";
    for (const auto& m : result.windows.transparency_minima)
        out << " (" << detail::format_g9(m.delta_p_mhz) << ", " << detail::format_g9(m.value)
            << ")";
    out << "\n";
    return out.str();
}

// Executes the configured sweep and writes the spectrum file. Returns the
// process exit status: 0 success, 1 config error, 2 solver error, 3 I/O error.
inline int run(const RunConfig& config, std::ostream& diag) {
    RunResult result;
    try {
        result = compute_run(config);
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        diag << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        diag << "config error: " << e.what() << "\n";
        return 1;
    }

    const std::string payload = config.output_format == OutputFormat::Csv
                                    ? to_csv(result.spectrum)
                                    : to_json(config, result);
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
        diag << "i/o error: cannot open '" << config.output_path << "' for writing\n";
        return 3;
    }
    out << payload;
    out.flush();
    if (!out) {
        diag << "i/o error: failed writing '" << config.output_path << "'\n";
        return 3;
    }

    diag << summary_text(config, result);
    diag << "wrote " << config.output_path << "\n";
    return 0;
}

}  // namespace mdsr
