#pragma once

// Zeeman-resolved level schemes on the 87Rb D1 line and the relative
// transition dipole amplitudes between their sublevels.
//
// Two schemes are supported: 5S1/2 F=1,2 -> 5P1/2 F'=1 and F'=2. States are
// ordered a-manifold (F=1), b-manifold (F=2), c-manifold (F'), each by
// ascending m, with labels a1..a3, b1..b5, c1..c(2F'+1).

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "mdsr/wigner.hpp"

namespace mdsr {

enum class Manifold { GroundF1, GroundF2, Excited };
enum class SchemeId { D1_Fp1, D1_Fp2 };

struct ZeemanState {
    Manifold manifold;
    int F;
    int m;
    std::string label;
    double zeeman_shift_mhz = 0.0;
};

// Bohr magneton over the Planck constant.
inline constexpr double kBohrMagnetonMHzPerG = 1.3996245;

// Hyperfine Lande factors of the 87Rb D1 manifolds (I = 3/2, g_I neglected).
inline double lande_g_factor(Manifold manifold, int excited_F) {
    switch (manifold) {
        case Manifold::GroundF1: return -0.5;
        case Manifold::GroundF2: return 0.5;
        case Manifold::Excited: return excited_F == 1 ? -1.0 / 6.0 : 1.0 / 6.0;
    }
    return 0.0;
}

struct LevelScheme {
    SchemeId id = SchemeId::D1_Fp2;
    int excited_F = 2;
    std::vector<ZeemanState> states;
    std::unordered_map<std::string, int> index;

    int size() const { return static_cast<int>(states.size()); }

    int index_of(const std::string& label) const {
        auto it = index.find(label);
        if (it == index.end()) throw std::invalid_argument("unknown state label: " + label);
        return it->second;
    }

    const ZeemanState& state(const std::string& label) const { return states[index_of(label)]; }

    std::vector<int> manifold_indices(Manifold m) const {
        std::vector<int> out;
        for (int i = 0; i < size(); ++i)
            if (states[i].manifold == m) out.push_back(i);
        return out;
    }
};

inline LevelScheme build_scheme(SchemeId id, double bias_field_G) {
    if (id != SchemeId::D1_Fp1 && id != SchemeId::D1_Fp2)
        throw std::invalid_argument("build_scheme: unknown scheme id");
    if (bias_field_G < 0.0)
        throw std::invalid_argument("build_scheme: bias field must be >= 0");

    LevelScheme scheme;
    scheme.id = id;
    scheme.excited_F = (id == SchemeId::D1_Fp1) ? 1 : 2;

    auto add_manifold = [&](Manifold manifold, int F, char prefix) {
        double g = lande_g_factor(manifold, scheme.excited_F);
        for (int m = -F; m <= F; ++m) {
            ZeemanState s;
            s.manifold = manifold;
            s.F = F;
            s.m = m;
            s.label = prefix + std::to_string(m + F + 1);
            s.zeeman_shift_mhz = g * kBohrMagnetonMHzPerG * bias_field_G * m;
            scheme.index[s.label] = scheme.size();
            scheme.states.push_back(std::move(s));
        }
    };
    add_manifold(Manifold::GroundF1, 1, 'a');
    add_manifold(Manifold::GroundF2, 2, 'b');
    add_manifold(Manifold::Excited, scheme.excited_F, 'c');
    return scheme;
}

struct DipoleEntry {
    int lower = 0;
    int upper = 0;
    int q = 0;        // spherical component, q = m_upper - m_lower
    double d = 0.0;   // block-normalized relative amplitude
};

// Relative dipole amplitudes lower -> excited, normalized so that the largest
// magnitude within each lower-manifold block is exactly 1. Signs follow the
// Condon-Shortley convention of the underlying Clebsch-Gordan coefficients.
class DipoleTable {
public:
    DipoleTable() = default;
    explicit DipoleTable(int n) : amp_(Eigen::MatrixXd::Zero(n, n)) {}

    double amplitude(int lower, int upper) const { return amp_(lower, upper); }
    const std::vector<DipoleEntry>& entries() const { return entries_; }

    void set(int lower, int upper, int q, double d) {
        amp_(lower, upper) = d;
        if (d != 0.0) entries_.push_back({lower, upper, q, d});
    }

private:
    Eigen::MatrixXd amp_;
    std::vector<DipoleEntry> entries_;
};

inline DipoleTable dipole_table(const LevelScheme& scheme) {
    DipoleTable table(scheme.size());
    const auto upper = scheme.manifold_indices(Manifold::Excited);

    for (Manifold lower_manifold : {Manifold::GroundF1, Manifold::GroundF2}) {
        const auto lower = scheme.manifold_indices(lower_manifold);

        // Raw <F m; 1 q | F' m'> for the block, exact.
        struct Raw {
            int l, u, q;
            wig::SqrtRational cg;
        };
        std::vector<Raw> raw;
        wig::SqrtRational block_max{};
        for (int l : lower) {
            for (int u : upper) {
                const int q = scheme.states[u].m - scheme.states[l].m;
                if (q < -1 || q > 1) continue;
                auto cg = wig::clebsch_gordan_exact(2 * scheme.states[l].F, 2 * scheme.states[l].m,
                                                    2, 2 * q, 2 * scheme.states[u].F,
                                                    2 * scheme.states[u].m);
                raw.push_back({l, u, q, cg});
                if (cg.sign != 0 && wig::compare_magnitude(cg, block_max) > 0) block_max = cg;
            }
        }
        for (const auto& r : raw)
            table.set(r.l, r.u, r.q, wig::normalized_value(r.cg, block_max));
    }
    return table;
}

// Rabi frequency of one transition given its normalized amplitude and the
// field scale (Rabi frequency of the strongest transition in the block).
inline double rabi_frequency(double d, double field_scale_mhz) {
    if (field_scale_mhz < 0.0)
        throw std::invalid_argument("rabi_frequency: field scale must be >= 0");
    return d * field_scale_mhz;
}

}  // namespace mdsr
