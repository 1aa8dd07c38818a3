#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mdsr/liouville.hpp"
#include "mdsr/reference.hpp"

using namespace mdsr;

TEST_CASE("dressed eigenvalues at zero coupling detuning") {
    const DressedLevels d78 = dressed_eigenvalues(78.0, 0.0);
    const std::array<double, 5> want78 = {-39.0, -19.5, 0.0, 19.5, 39.0};
    for (int i = 0; i < 5; ++i)
        CHECK(d78.energies_mhz[size_t(i)] == doctest::Approx(want78[size_t(i)]).epsilon(1e-12));

    const DressedLevels d56 = dressed_eigenvalues(56.0, 0.0);
    const std::array<double, 5> want56 = {-28.0, -14.0, 0.0, 14.0, 28.0};
    for (int i = 0; i < 5; ++i)
        CHECK(d56.energies_mhz[size_t(i)] == doctest::Approx(want56[size_t(i)]).epsilon(1e-12));

    const DressedLevels d0 = dressed_eigenvalues(0.0, 0.0);
    for (double e : d0.energies_mhz) CHECK(e == 0.0);

    // symmetric about zero with the middle level exactly at zero
    for (double omega : {14.0, 31.0, 56.0, 78.0}) {
        const DressedLevels d = dressed_eigenvalues(omega, 0.0);
        CHECK(d.energies_mhz[2] == 0.0);
        CHECK(d.energies_mhz[0] == doctest::Approx(-d.energies_mhz[4]));
        CHECK(d.energies_mhz[1] == doctest::Approx(-d.energies_mhz[3]));
    }

    CHECK_THROWS_AS(dressed_eigenvalues(-1.0, 0.0), std::invalid_argument);
}

TEST_CASE("dressed eigenvalues match the coupling-block Hamiltonian") {
    const LevelScheme scheme = build_scheme(SchemeId::D1_Fp2, 0.0);
    const DipoleTable dipoles = dipole_table(scheme);
    for (double omega : {14.0, 31.0, 56.0, 78.0}) {
        for (double delta_c : {0.0, 5.0, -5.0}) {
            const CMatrix H = assemble_hamiltonian(scheme, dipoles,
                                                   {FieldConfig::coupling(omega, delta_c)});
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.block(3, 3, 10, 10));
            const DressedLevels ref = dressed_eigenvalues(omega, delta_c);
            for (double e : ref.energies_mhz) {
                double best = 1e300;
                for (int i = 0; i < 10; ++i)
                    best = std::min(best, std::abs(es.eigenvalues()(i) - e));
                CHECK(best <= 1e-9);
            }
        }
    }
}

TEST_CASE("analytic Lambda susceptibility") {
    // dark state at two-photon resonance as gamma_ab -> 0
    const auto dark = analytic_lambda_chi(78.0, 3.0, 3.0, 2.8, 1e-12, 1.0);
    CHECK(std::abs(dark) < 1e-9);
    CHECK(std::abs(analytic_lambda_chi(78.0, 0.0, 0.0, 2.8, 0.0, 1.0)) == 0.0);

    // no coupling: two-level Lorentzian, absorption maximal on resonance
    double peak_loc = -100.0, peak_val = -1.0;
    for (double d = -20.0; d <= 20.0; d += 0.01) {
        const double v = analytic_lambda_chi(0.0, d, 0.0, 2.8, 0.04, 1.0).imag();
        CHECK(v >= 0.0);
        if (v > peak_val) {
            peak_val = v;
            peak_loc = d;
        }
    }
    CHECK(std::abs(peak_loc) <= 0.011);
    CHECK(peak_val == doctest::Approx(1.0 / 2.8).epsilon(1e-9));

    // strong coupling: absorption maxima near +-Omega/2
    for (double omega : {56.0, 78.0}) {
        double pos_loc = 0.0, pos_val = -1.0;
        for (double d = 1.0; d <= 60.0; d += 0.005) {
            const double v = analytic_lambda_chi(omega, d, 0.0, 2.8, 0.04, 1.0).imag();
            if (v > pos_val) {
                pos_val = v;
                pos_loc = d;
            }
        }
        CHECK(std::abs(pos_loc - omega / 2) <= 2.0);
    }
}

TEST_CASE("per-channel linear response equals the analytic form") {
    const LevelScheme scheme = build_scheme(SchemeId::D1_Fp2, 0.0);
    const DipoleTable dipoles = dipole_table(scheme);
    ModelParams params;
    const double lw = 1.5;
    const auto fields = std::vector<FieldConfig>{FieldConfig::coupling(78.0, 0.7, lw),
                                                 FieldConfig::probe(2.0, 0.0, lw)};
    // identical dephasing mapping: probe FWHM on the optical coherence, both
    // FWHMs on the two-photon coherence
    const double gamma_ac_eff = params.gamma_ac_mhz + lw;
    const double gamma_ab_eff = params.gamma_ab_mhz + 2 * lw;

    for (double delta_p = -60.0; delta_p <= 60.0; delta_p += 0.6) {
        const auto lr = linear_response_coherences(scheme, dipoles, fields, params, delta_p);
        for (size_t i = 0; i < lr.transitions.size(); ++i) {
            const auto& t = lr.transitions[i];
            const double omega_p = t.d_probe * 2.0 / std::sqrt(2.0);
            const double omega_c = t.d_coupling * 78.0;
            // chi contribution of this transition in solver scale
            const Complex got = -lr.coherence[i] / omega_p;
            const Complex want = analytic_lambda_chi(omega_c, delta_p, 0.7, gamma_ac_eff,
                                                     gamma_ab_eff, 1.0 / 6.0);
            CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
        }
    }
}
