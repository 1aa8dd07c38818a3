#pragma once

// Probe susceptibility spectra: the three channel susceptibilities and their
// total, swept over probe detuning, plus transmission, group index, and the
// EIT window geometry of the total absorption profile.

#include <cmath>
#include <complex>
#include <iostream>
#include <string>
#include <vector>

#include "mdsr/errors.hpp"
#include "mdsr/liouville.hpp"

namespace mdsr {

inline constexpr double kSpeedOfLightMPerS = 299792458.0;

struct SusceptibilitySpectrum {
    std::vector<double> grid_mhz;
    std::vector<Complex> chi1, chi2, chi3, chi_total;
    std::vector<double> transmission;
    std::vector<double> group_index;
};

// Global susceptibility scale, calibrated so an ideal two-level transition at
// natural width gives the standard resonant optical depth N * sigma0 * L with
// sigma0 = 3 lambda^2 / (2 pi). Spectral shapes are independent of it.
inline double susceptibility_prefactor(const ModelParams& params) {
    const double lambda_m = params.probe_wavelength_nm * 1e-9;
    const double density_per_m3 = params.atom_density_per_cm3 * 1e6;
    const double sigma0 = 3.0 * lambda_m * lambda_m / (2.0 * M_PI);
    return 2.0 * params.gamma_ac_mhz * density_per_m3 * sigma0 * lambda_m / (2.0 * M_PI);
}

// chi_i = -prefactor * sum over the channel's transitions of
// |d|^2 * <c|rho|a> / Omega_p, with Omega_p the transition's probe Rabi
// component. Channels with no transitions (F'=1 has no |m'|=2 states) are 0.
inline Complex channel_susceptibility(int channel, const std::vector<ProbeTransition>& transitions,
                                      const std::vector<Complex>& coherence,
                                      const FieldConfig& probe, const ModelParams& params) {
    if (channel < 1 || channel > 3)
        throw std::invalid_argument("channel_susceptibility: channel must be 1, 2, or 3");
    if (transitions.size() != coherence.size())
        throw std::invalid_argument("channel_susceptibility: coherence list mismatch");
    const double scale = susceptibility_prefactor(params);
    Complex chi = 0.0;
    for (size_t i = 0; i < transitions.size(); ++i) {
        const ProbeTransition& t = transitions[i];
        if (t.channel != channel) continue;
        const double omega_p = t.d_probe * probe.rabi_scale_mhz * probe.pol_weight(t.q);
        if (omega_p == 0.0)
            throw std::invalid_argument(
                "channel_susceptibility: zero probe Rabi component in channel " +
                std::to_string(channel) + " (zero probe amplitude or polarization weight)");
        chi += -scale * t.d_probe * t.d_probe * coherence[i] / omega_p;
    }
    return chi;
}

// Ascending grid of probe detunings; built symmetric (exact mirrored values,
// exact zero center) whenever start == -stop.
inline std::vector<double> make_grid(double start_mhz, double stop_mhz, int points) {
    if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (!(stop_mhz > start_mhz)) throw std::invalid_argument("grid stop must exceed start");
    std::vector<double> grid(static_cast<size_t>(points));
    if (start_mhz == -stop_mhz) {
        for (int i = 0; i < points; ++i) {
            const double x = stop_mhz * (2.0 * i - (points - 1)) / (points - 1);
            grid[static_cast<size_t>(i)] = x;
        }
        for (int i = 0; i < points / 2; ++i)
            grid[static_cast<size_t>(i)] = -grid[static_cast<size_t>(points - 1 - i)];
        if (points % 2 == 1) grid[static_cast<size_t>(points / 2)] = 0.0;
    } else {
        const double step = (stop_mhz - start_mhz) / (points - 1);
        for (int i = 0; i < points; ++i) grid[static_cast<size_t>(i)] = start_mhz + step * i;
        grid.back() = stop_mhz;
    }
    return grid;
}

// Beer-Lambert transmission exp(-(2 pi / lambda) L Im chi).
inline std::vector<double> transmission(const SusceptibilitySpectrum& spectrum,
                                        const ModelParams& params) {
    const double lambda_m = params.probe_wavelength_nm * 1e-9;
    const double length_m = params.path_length_mm * 1e-3;
    const double k = 2.0 * M_PI / lambda_m * length_m;
    std::vector<double> out;
    out.reserve(spectrum.chi_total.size());
    for (const Complex& chi : spectrum.chi_total) out.push_back(std::exp(-k * chi.imag()));
    return out;
}

// Group index n_g = 1 + Re chi / 2 + (f_probe / 2) d(Re chi)/d(delta_p),
// central differences inside the grid, one-sided at the edges.
inline std::vector<double> group_index(const SusceptibilitySpectrum& spectrum,
                                       const ModelParams& params) {
    const size_t n = spectrum.grid_mhz.size();
    if (n < 3) throw std::invalid_argument("group_index needs at least 3 grid points");
    const double f_probe_mhz = kSpeedOfLightMPerS / (params.probe_wavelength_nm * 1e-9) / 1e6;
    std::vector<double> out(n);
    auto re = [&](size_t i) { return spectrum.chi_total[i].real(); };
    auto x = [&](size_t i) { return spectrum.grid_mhz[i]; };
    for (size_t i = 0; i < n; ++i) {
        double slope;
        if (i == 0)
            slope = (re(1) - re(0)) / (x(1) - x(0));
        else if (i == n - 1)
            slope = (re(n - 1) - re(n - 2)) / (x(n - 1) - x(n - 2));
        else
            slope = (re(i + 1) - re(i - 1)) / (x(i + 1) - x(i - 1));
        out[i] = 1.0 + 0.5 * re(i) + 0.5 * f_probe_mhz * slope;
    }
    return out;
}

// Full spectrum sweep. FixedEqualF1 evaluates the per-channel linear response;
// FullPumping solves the regularized Liouvillian steady state per grid point.
inline SusceptibilitySpectrum sweep_spectrum(const LevelScheme& scheme,
                                             const DipoleTable& dipoles,
                                             const std::vector<FieldConfig>& fields,
                                             const ModelParams& params,
                                             const std::vector<double>& grid) {
    params.validate();
    if (grid.size() < 2) throw std::invalid_argument("sweep_spectrum: grid needs >= 2 points");
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("sweep_spectrum: grid must be strictly ascending");
    const FieldConfig* probe = find_field(fields, FieldRole::Probe);
    if (!probe) throw std::invalid_argument("sweep_spectrum: probe field required");
    if (!probe_is_weak(fields))
        std::cerr << "warning: probe Rabi exceeds 0.2 of the coupling Rabi; "
                     "linear response may be inaccurate\n";

    const auto transitions = probe_transitions(scheme, dipoles);

    SusceptibilitySpectrum s;
    s.grid_mhz = grid;
    s.chi1.reserve(grid.size());
    s.chi2.reserve(grid.size());
    s.chi3.reserve(grid.size());
    s.chi_total.reserve(grid.size());

    for (double delta_p : grid) {
        std::vector<FieldConfig> pt = fields;
        for (auto& f : pt)
            if (f.role == FieldRole::Probe) f.detuning_mhz = delta_p;
        try {
            std::vector<Complex> coherence;
            if (params.population_model == PopulationModel::FixedEqualF1) {
                coherence = linear_response_coherences(scheme, dipoles, pt, params, delta_p)
                                .coherence;
            } else {
                const CMatrix rho = solve_steady_state(scheme, dipoles, pt, params);
                coherence.reserve(transitions.size());
                for (const auto& t : transitions) coherence.push_back(rho(t.c_idx, t.a_idx));
            }
            const Complex c1 = channel_susceptibility(1, transitions, coherence, *probe, params);
            const Complex c2 = channel_susceptibility(2, transitions, coherence, *probe, params);
            const Complex c3 = channel_susceptibility(3, transitions, coherence, *probe, params);
            s.chi1.push_back(c1);
            s.chi2.push_back(c2);
            s.chi3.push_back(c3);
            s.chi_total.push_back(c1 + c2 + c3);
        } catch (const SolverError& e) {
            throw SolverError("delta_p = " + std::to_string(delta_p) + " MHz: " + e.what());
        }
    }

    s.transmission = transmission(s, params);
    if (grid.size() >= 3) s.group_index = group_index(s, params);
    return s;
}

struct Extremum {
    double delta_p_mhz = 0.0;
    double value = 0.0;
};

struct WindowReport {
    std::vector<Extremum> absorption_peaks;     // local maxima of Im chi_total
    std::vector<Extremum> transparency_minima;  // minima between the outermost peaks
    int window_count = 0;
};

// Strict 3-point extrema of Im chi_total, with flat runs reported at their
// midpoint. A transparency window is a local minimum strictly between the
// outermost absorption peaks.
inline WindowReport find_windows(const SusceptibilitySpectrum& spectrum) {
    WindowReport report;
    const size_t n = spectrum.grid_mhz.size();
    if (n < 3) return report;
    auto y = [&](size_t i) { return spectrum.chi_total[i].imag(); };

    std::vector<Extremum> maxima, minima;
    size_t i = 1;
    while (i + 1 < n) {
        size_t j = i;
        while (j + 1 < n && y(j + 1) == y(i)) ++j;  // flat run [i, j]
        if (j + 1 < n) {
            const double left = y(i - 1), mid = y(i), right = y(j + 1);
            const double loc = 0.5 * (spectrum.grid_mhz[i] + spectrum.grid_mhz[j]);
            if (mid > left && mid > right) maxima.push_back({loc, mid});
            if (mid < left && mid < right) minima.push_back({loc, mid});
        }
        i = j + 1;
    }

    report.absorption_peaks = maxima;
    if (maxima.size() >= 2) {
        const double lo = maxima.front().delta_p_mhz;
        const double hi = maxima.back().delta_p_mhz;
        for (const auto& m : minima)
            if (m.delta_p_mhz > lo && m.delta_p_mhz < hi) report.transparency_minima.push_back(m);
    }
    report.window_count = static_cast<int>(report.transparency_minima.size());
    return report;
}

}  // namespace mdsr
