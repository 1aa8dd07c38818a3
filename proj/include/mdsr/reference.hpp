#pragma once

// Closed-form oracles: dressed-state energies of the pi-coupled F=2 -> F'=2
// block and the analytic weak-probe Lambda susceptibility. Used to
// cross-validate the numerical solver.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mdsr {

struct DressedLevels {
    std::array<double, 5> energies_mhz{};  // sorted ascending
};

// Dressed energies of the five excited sublevels under a pi coupling with
// Omega_c22 on the stretched transitions and Omega_c11 = Omega_c22/2 on the
// inner ones. Each driven pair contributes delta_c/2 +- sqrt(delta_c^2 +
// Omega^2)/2; the undriven m'=0 level stays at its bare position.
inline DressedLevels dressed_eigenvalues(double omega_c22_mhz, double delta_c_mhz) {
    if (omega_c22_mhz < 0.0)
        throw std::invalid_argument("dressed_eigenvalues: Rabi frequency must be >= 0");
    const double omega_c11 = 0.5 * omega_c22_mhz;
    auto pair_level = [&](double omega, int sign) {
        return 0.5 * delta_c_mhz +
               0.5 * sign * std::sqrt(delta_c_mhz * delta_c_mhz + omega * omega);
    };
    DressedLevels out;
    out.energies_mhz = {pair_level(omega_c22_mhz, -1), pair_level(omega_c11, -1), 0.0,
                        pair_level(omega_c11, +1), pair_level(omega_c22_mhz, +1)};
    std::sort(out.energies_mhz.begin(), out.energies_mhz.end());
    return out;
}

// Weak-probe susceptibility of one Lambda channel,
//   chi = weight * i / [ (gamma_ac - i*delta_p)
//                        + (omega_c/2)^2 / (gamma_ab - i*(delta_p - delta_c)) ].
// The weight carries the channel prefactor so comparisons against the solver
// are exact rather than shape-only.
inline std::complex<double> analytic_lambda_chi(double omega_c_mhz, double delta_p_mhz,
                                                double delta_c_mhz, double gamma_ac_mhz,
                                                double gamma_ab_mhz, double weight) {
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> denom = gamma_ac_mhz - I * delta_p_mhz;
    if (omega_c_mhz != 0.0) {
        const double det_tp = delta_p_mhz - delta_c_mhz;
        if (gamma_ab_mhz == 0.0 && det_tp == 0.0) return 0.0;  // exact dark state
        denom += 0.25 * omega_c_mhz * omega_c_mhz / (gamma_ab_mhz - I * det_tp);
    }
    return weight * I / denom;
}

}  // namespace mdsr
