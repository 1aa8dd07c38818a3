#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mdsr/spectra.hpp"

using namespace mdsr;

namespace {

struct System {
    LevelScheme scheme;
    DipoleTable dipoles;
};

System make_system(SchemeId id = SchemeId::D1_Fp2) {
    System s{build_scheme(id, 0.0), {}};
    s.dipoles = dipole_table(s.scheme);
    return s;
}

std::vector<FieldConfig> figure_fields(double omega_c22) {
    return {FieldConfig::coupling(omega_c22, 0.0, 1.5), FieldConfig::probe(2.0, 0.0, 1.5)};
}

}  // namespace

TEST_CASE("make_grid") {
    const auto g = make_grid(-60.0, 60.0, 2001);
    CHECK(g.size() == 2001);
    CHECK(g.front() == -60.0);
    CHECK(g.back() == 60.0);
    CHECK(g[1000] == 0.0);
    for (size_t i = 0; i < g.size(); ++i) CHECK(g[i] == -g[g.size() - 1 - i]);
    for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);

    const auto asym = make_grid(-10.0, 50.0, 7);
    CHECK(asym.front() == -10.0);
    CHECK(asym.back() == 50.0);

    CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, -1.0, 5), std::invalid_argument);
}

TEST_CASE("channel additivity and parity") {
    const System sys = make_system();
    ModelParams params;
    const auto spectrum = sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(78.0), params,
                                         make_grid(-60.0, 60.0, 801));

    double max_im = 0.0, max_re = 0.0;
    for (size_t i = 0; i < spectrum.grid_mhz.size(); ++i) {
        const Complex sum = spectrum.chi1[i] + spectrum.chi2[i] + spectrum.chi3[i];
        CHECK(std::abs(sum - spectrum.chi_total[i]) <= 1e-12);
        max_im = std::max(max_im, std::abs(spectrum.chi_total[i].imag()));
        max_re = std::max(max_re, std::abs(spectrum.chi_total[i].real()));
    }
    for (size_t i = 0; i < spectrum.grid_mhz.size(); ++i) {
        const size_t j = spectrum.grid_mhz.size() - 1 - i;
        CHECK(std::abs(spectrum.chi_total[i].imag() - spectrum.chi_total[j].imag()) <=
              1e-9 * max_im);
        CHECK(std::abs(spectrum.chi_total[i].real() + spectrum.chi_total[j].real()) <=
              1e-9 * max_re);
    }
}

TEST_CASE("passivity across the coupling series") {
    const System sys = make_system();
    ModelParams params;
    for (double omega : {0.0, 14.0, 31.0, 56.0, 78.0}) {
        const auto s = sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(omega), params,
                                      make_grid(-60.0, 60.0, 501));
        for (const Complex& chi : s.chi_total) CHECK(chi.imag() >= -1e-12);
        for (double t : s.transmission) {
            CHECK(t > 0.0);
            CHECK(t <= 1.0);
        }
    }
}

TEST_CASE("window counts follow the coupling strength") {
    const System sys = make_system();
    ModelParams params;
    const auto grid = make_grid(-60.0, 60.0, 2001);

    auto count = [&](double omega) {
        return find_windows(sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(omega), params,
                                           grid))
            .window_count;
    };
    CHECK(count(14.0) == 1);
    CHECK(count(31.0) == 4);
    CHECK(count(56.0) == 4);
    CHECK(count(78.0) == 4);

    // pure absorption without the coupling beam: no transparency window
    CHECK(count(0.0) == 0);
}

TEST_CASE("F'=1 control scheme keeps a single window") {
    const System sys = make_system(SchemeId::D1_Fp1);
    ModelParams params;
    const auto grid = make_grid(-60.0, 60.0, 2001);
    for (double omega : {14.0, 78.0}) {
        const auto report = find_windows(
            sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(omega), params, grid));
        CHECK(report.window_count == 1);
    }
}

TEST_CASE("outer peak locations scale as Omega_c22 / 2") {
    const System sys = make_system();
    ModelParams params;
    const auto grid = make_grid(-60.0, 60.0, 2001);
    double sxy = 0.0, sxx = 0.0;
    for (double omega : {31.0, 56.0, 78.0}) {
        const auto report = find_windows(
            sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(omega), params, grid));
        REQUIRE(!report.absorption_peaks.empty());
        const double outer = report.absorption_peaks.back().delta_p_mhz;
        sxy += omega * outer;
        sxx += omega * omega;
    }
    const double slope = sxy / sxx;
    CHECK(slope == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("normal dispersion at every transparency minimum") {
    const System sys = make_system();
    ModelParams params;
    const auto grid = make_grid(-60.0, 60.0, 2001);
    for (double omega : {31.0, 56.0, 78.0}) {
        const auto s =
            sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(omega), params, grid);
        const auto report = find_windows(s);
        for (const auto& m : report.transparency_minima) {
            size_t i = 0;
            while (s.grid_mhz[i] < m.delta_p_mhz) ++i;
            const double slope = (s.chi_total[i + 1].real() - s.chi_total[i - 1].real()) /
                                 (s.grid_mhz[i + 1] - s.grid_mhz[i - 1]);
            CHECK(slope > 0.0);
        }
    }
}

TEST_CASE("channel ordering and transmission contrast at strong coupling") {
    const System sys = make_system();
    ModelParams params;
    const auto s = sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(78.0), params,
                                  make_grid(-60.0, 60.0, 2001));
    const size_t center = 1000;
    REQUIRE(s.grid_mhz[center] == 0.0);

    // at line center the uncoupled m'=0 channel dominates the EIT'd ones
    CHECK(s.chi3[center].imag() > s.chi2[center].imag());
    CHECK(s.chi3[center].imag() > s.chi1[center].imag());

    // the windows transmit more than twice what the central peak does
    const auto report = find_windows(s);
    REQUIRE(report.window_count == 4);
    double t_center = 0.0;
    for (const auto& p : report.absorption_peaks)
        if (std::abs(p.delta_p_mhz) < 2.0) {
            size_t i = 0;
            while (s.grid_mhz[i] < p.delta_p_mhz) ++i;
            t_center = s.transmission[i];
        }
    for (const auto& m : report.transparency_minima) {
        size_t i = 0;
        while (s.grid_mhz[i] < m.delta_p_mhz) ++i;
        CHECK(s.transmission[i] > 2.0 * t_center);
    }
}

TEST_CASE("transmission obeys Beer-Lambert scaling") {
    SusceptibilitySpectrum s;
    s.grid_mhz = {-1.0, 0.0, 1.0};
    s.chi_total = {Complex(0.0, 0.0), Complex(1e-4, 3e-4), Complex(-2e-4, 8e-4)};
    s.chi1 = s.chi2 = s.chi3 = {Complex(0), Complex(0), Complex(0)};

    ModelParams params;
    const auto t1 = transmission(s, params);
    CHECK(t1[0] == 1.0);  // Im chi = 0
    ModelParams doubled = params;
    doubled.path_length_mm = 2.0 * params.path_length_mm;
    const auto t2 = transmission(s, doubled);
    for (size_t i = 0; i < t1.size(); ++i)
        CHECK(t2[i] == doctest::Approx(t1[i] * t1[i]).epsilon(1e-12));
}

TEST_CASE("group index basics") {
    SusceptibilitySpectrum flat;
    flat.grid_mhz = {-1.0, 0.0, 1.0, 2.0};
    flat.chi_total.assign(4, Complex(0.0, 0.0));
    const auto ng = group_index(flat, ModelParams{});
    for (double v : ng) CHECK(v == 1.0);

    SusceptibilitySpectrum two;
    two.grid_mhz = {0.0, 1.0};
    two.chi_total.assign(2, Complex(0.0, 0.0));
    CHECK_THROWS_AS(group_index(two, ModelParams{}), std::invalid_argument);
}

// Rising zero crossings of Re chi: the centers of the steep normal-dispersion
// segments the dispersion figures show at each transparency window.
static std::vector<size_t> rising_crossings(const SusceptibilitySpectrum& s) {
    std::vector<size_t> out;
    int last_sign = 0;
    for (size_t i = 0; i < s.grid_mhz.size(); ++i) {
        const double re = s.chi_total[i].real();
        const int sign = re > 0.0 ? 1 : (re < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (last_sign < 0 && sign > 0) out.push_back(i);
        last_sign = sign;
    }
    return out;
}

TEST_CASE("dispersion features sit at the transparency windows") {
    const System sys = make_system();
    ModelParams params;
    const auto grid = make_grid(-60.0, 60.0, 2001);

    // weak coupling: a single steep feature at line center
    const auto s14 = sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(14.0), params, grid);
    const auto up14 = rising_crossings(s14);
    REQUIRE(up14.size() == 1);
    CHECK(std::abs(s14.grid_mhz[up14[0]]) <= 2.0);
    CHECK(s14.group_index[up14[0]] > 100.0);  // slow light at the window

    // strong coupling: one steep feature per window, near each minimum
    const auto s78 = sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(78.0), params, grid);
    const auto up78 = rising_crossings(s78);
    const auto report = find_windows(s78);
    REQUIRE(report.window_count == 4);
    CHECK(up78.size() == 4);
    for (size_t k = 0; k < up78.size(); ++k) {
        CHECK(std::abs(s78.grid_mhz[up78[k]] -
                       report.transparency_minima[k].delta_p_mhz) < 3.0);
        CHECK(s78.group_index[up78[k]] > 100.0);
    }
}

TEST_CASE("find_windows handles plateaus and monotone data") {
    SusceptibilitySpectrum s;
    for (int i = 0; i <= 10; ++i) s.grid_mhz.push_back(double(i));
    // flat-top peak over [3, 5], second peak at 8, window at 7
    const double y[] = {0.0, 0.1, 0.5, 1.0, 1.0, 1.0, 0.5, 0.1, 0.3, 0.2, 0.0};
    for (double v : y) s.chi_total.push_back(Complex(0.0, v));
    const auto report = find_windows(s);
    REQUIRE(report.absorption_peaks.size() == 2);
    CHECK(report.absorption_peaks[0].delta_p_mhz == doctest::Approx(4.0));  // plateau midpoint
    CHECK(report.absorption_peaks[0].value == doctest::Approx(1.0));
    CHECK(report.window_count == 1);
    CHECK(report.transparency_minima[0].delta_p_mhz == doctest::Approx(7.0));

    SusceptibilitySpectrum mono;
    for (int i = 0; i < 5; ++i) {
        mono.grid_mhz.push_back(double(i));
        mono.chi_total.push_back(Complex(0.0, double(i)));
    }
    const auto empty = find_windows(mono);
    CHECK(empty.absorption_peaks.empty());
    CHECK(empty.window_count == 0);
}

TEST_CASE("full pumping sweep stays physical") {
    const System sys = make_system();
    ModelParams params;
    params.population_model = PopulationModel::FullPumping;
    params.ground_mixing_rate_mhz = 0.04;
    const auto s = sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(78.0), params,
                                  make_grid(-60.0, 60.0, 201));
    for (const Complex& chi : s.chi_total) CHECK(chi.imag() >= -1e-12);
    CHECK(find_windows(s).window_count == 4);

    // without ground mixing and with no probe power the ground manifold is
    // dark-state degenerate; the failure names the offending detuning
    ModelParams singular = params;
    singular.ground_mixing_rate_mhz = 0.0;
    auto dark_fields = std::vector<FieldConfig>{FieldConfig::coupling(78.0, 0.0, 1.5),
                                                FieldConfig::probe(0.0, 0.0, 1.5)};
    try {
        sweep_spectrum(sys.scheme, sys.dipoles, dark_fields, singular,
                       make_grid(-60.0, 60.0, 5));
        CHECK(false);
    } catch (const SolverError& e) {
        CHECK(std::string(e.what()).find("delta_p") != std::string::npos);
    }
}

TEST_CASE("a bias field splits features but keeps the spectrum even") {
    ModelParams params;
    const auto grid = make_grid(-60.0, 60.0, 801);

    const LevelScheme bare = build_scheme(SchemeId::D1_Fp2, 0.0);
    const auto s0 = sweep_spectrum(bare, dipole_table(bare), figure_fields(78.0), params, grid);

    const LevelScheme shifted = build_scheme(SchemeId::D1_Fp2, 0.5);
    const auto s1 =
        sweep_spectrum(shifted, dipole_table(shifted), figure_fields(78.0), params, grid);

    // mirror channels carry opposite Zeeman shifts, so the summed response
    // stays even in delta_p; the features split instead of moving
    double max_im = 0.0, asym = 0.0, moved = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        CHECK(s1.chi_total[i].imag() >= -1e-12);
        max_im = std::max(max_im, std::abs(s1.chi_total[i].imag()));
        moved = std::max(moved, std::abs(s1.chi_total[i].imag() - s0.chi_total[i].imag()));
    }
    for (size_t i = 0; i < grid.size(); ++i) {
        const size_t j = grid.size() - 1 - i;
        asym = std::max(asym, std::abs(s1.chi_total[i].imag() - s1.chi_total[j].imag()));
    }
    CHECK(asym <= 1e-9 * max_im);
    CHECK(moved > 1e-3 * max_im);  // half a gauss visibly reshapes the lines
}

TEST_CASE("sweep input validation") {
    const System sys = make_system();
    ModelParams params;
    CHECK_THROWS_AS(sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(78.0), params, {0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep_spectrum(sys.scheme, sys.dipoles, figure_fields(78.0), params,
                                   {0.0, -1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep_spectrum(sys.scheme, sys.dipoles, {FieldConfig::coupling(78.0)},
                                   params, {0.0, 1.0}),
                    std::invalid_argument);

    // sigma-less probe polarization cannot feed the sigma channels
    auto fields = figure_fields(78.0);
    fields[1].polarization = {0.0, 1.0, 0.0};
    CHECK_THROWS_AS(sweep_spectrum(sys.scheme, sys.dipoles, fields, params,
                                   make_grid(-1.0, 1.0, 3)),
                    std::invalid_argument);
}
