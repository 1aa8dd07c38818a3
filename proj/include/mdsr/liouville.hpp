#pragma once

// Rotating-frame Hamiltonian, Lindblad dissipators, and steady-state solvers
// for the driven Zeeman-sublevel system.
//
// Every frequency-like quantity (Rabi, detuning, decay rate, linewidth) is in
// MHz and enters the equations of motion directly as a rate, so the matching
// time unit is microseconds and dressed splittings appear at +-Omega/2.

#include <algorithm>
#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mdsr/errors.hpp"
#include "mdsr/levels.hpp"

namespace mdsr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

enum class FieldRole { Coupling, Probe };
enum class PopulationModel { FixedEqualF1, FullPumping };

struct FieldConfig {
    FieldRole role = FieldRole::Probe;
    double rabi_scale_mhz = 0.0;   // Rabi frequency of the strongest transition in the block
    double detuning_mhz = 0.0;     // relative to the addressed line center
    std::array<double, 3> polarization{};  // weights for q = -1, 0, +1
    double linewidth_mhz = 0.0;    // laser FWHM

    double pol_weight(int q) const { return polarization[static_cast<size_t>(q + 1)]; }

    Manifold addressed_manifold() const {
        return role == FieldRole::Coupling ? Manifold::GroundF2 : Manifold::GroundF1;
    }

    void validate() const {
        if (rabi_scale_mhz < 0.0) throw std::invalid_argument("field: rabi scale must be >= 0");
        if (linewidth_mhz < 0.0) throw std::invalid_argument("field: linewidth must be >= 0");
    }

    // Pi-polarized coupling beam along the quantization axis.
    static FieldConfig coupling(double rabi_mhz, double detuning_mhz = 0.0,
                                double linewidth_mhz = 0.0) {
        FieldConfig f;
        f.role = FieldRole::Coupling;
        f.rabi_scale_mhz = rabi_mhz;
        f.detuning_mhz = detuning_mhz;
        f.polarization = {0.0, 1.0, 0.0};
        f.linewidth_mhz = linewidth_mhz;
        return f;
    }

    // Probe linearly polarized perpendicular to the quantization axis:
    // equal sigma+ and sigma- components carrying rabi_scale/sqrt(2) each.
    static FieldConfig probe(double rabi_mhz, double detuning_mhz = 0.0,
                             double linewidth_mhz = 0.0) {
        FieldConfig f;
        f.role = FieldRole::Probe;
        f.rabi_scale_mhz = rabi_mhz;
        f.detuning_mhz = detuning_mhz;
        const double w = 1.0 / std::sqrt(2.0);
        f.polarization = {w, 0.0, w};
        f.linewidth_mhz = linewidth_mhz;
        return f;
    }
};

struct ModelParams {
    double gamma_ac_mhz = 2.8;    // optical coherence decay (excited decay is 2*gamma_ac)
    double gamma_ab_mhz = 0.04;   // ground two-photon coherence decay
    PopulationModel population_model = PopulationModel::FixedEqualF1;
    double ground_mixing_rate_mhz = 0.04;  // FullPumping only
    double atom_density_per_cm3 = 1e11;
    double path_length_mm = 2.0;
    double probe_wavelength_nm = 794.98;

    void validate() const {
        if (gamma_ac_mhz < 0.0) throw std::invalid_argument("gamma_ac must be >= 0");
        if (gamma_ab_mhz < 0.0) throw std::invalid_argument("gamma_ab must be >= 0");
        if (ground_mixing_rate_mhz < 0.0)
            throw std::invalid_argument("ground mixing rate must be >= 0");
        if (atom_density_per_cm3 <= 0.0) throw std::invalid_argument("atom density must be > 0");
        if (path_length_mm <= 0.0) throw std::invalid_argument("path length must be > 0");
        if (probe_wavelength_nm <= 0.0) throw std::invalid_argument("wavelength must be > 0");
    }
};

inline const FieldConfig* find_field(const std::vector<FieldConfig>& fields, FieldRole role) {
    const FieldConfig* found = nullptr;
    for (const auto& f : fields) {
        if (f.role != role) continue;
        if (found) throw std::invalid_argument("at most one field per role is supported");
        found = &f;
    }
    return found;
}

// Rotating-frame Hamiltonian. Diagonal: 0 on the a-manifold, Delta_c - Delta_p
// on b, -Delta_p on c, plus Zeeman shifts; drives enter as Omega_ij/2 with
// Omega_ij = d_ij * rabi_scale * pol_weight(q).
inline CMatrix assemble_hamiltonian(const LevelScheme& scheme, const DipoleTable& dipoles,
                                    const std::vector<FieldConfig>& fields) {
    const int n = scheme.size();
    CMatrix H = CMatrix::Zero(n, n);

    const FieldConfig* probe = find_field(fields, FieldRole::Probe);
    const FieldConfig* coupling = find_field(fields, FieldRole::Coupling);
    const double dp = probe ? probe->detuning_mhz : 0.0;
    const double dc = coupling ? coupling->detuning_mhz : 0.0;

    for (int i = 0; i < n; ++i) {
        const ZeemanState& s = scheme.states[i];
        double e = s.zeeman_shift_mhz;
        if (s.manifold == Manifold::GroundF2) e += dc - dp;
        if (s.manifold == Manifold::Excited) e += -dp;
        H(i, i) = e;
    }

    for (const auto& f : fields) {
        f.validate();
        const auto lower = scheme.manifold_indices(f.addressed_manifold());
        const auto upper = scheme.manifold_indices(Manifold::Excited);
        if (lower.empty() || upper.empty())
            throw std::invalid_argument("field addresses an absent manifold");
        for (int l : lower) {
            for (int u : upper) {
                const int q = scheme.states[u].m - scheme.states[l].m;
                if (q < -1 || q > 1) continue;
                const double w = f.pol_weight(q);
                const double d = dipoles.amplitude(l, u);
                if (w == 0.0 || d == 0.0) continue;
                const double half_rabi = 0.5 * d * f.rabi_scale_mhz * w;
                H(u, l) += half_rabi;
                H(l, u) += half_rabi;
            }
        }
    }
    return H;
}

struct Dissipator {
    CMatrix op;       // jump operator
    double rate_mhz;  // Lindblad rate
};

// Spontaneous emission from each excited sublevel into all dipole-allowed
// lower states, branching by |d|^2, total population decay 2*gamma_ac per
// excited state. FullPumping additionally relaxes the ground manifolds
// uniformly toward the equal mixture at the ground mixing rate.
inline std::vector<Dissipator> assemble_dissipators(const LevelScheme& scheme,
                                                    const DipoleTable& dipoles,
                                                    const ModelParams& params) {
    params.validate();
    const int n = scheme.size();
    const double Gamma = 2.0 * params.gamma_ac_mhz;
    std::vector<Dissipator> out;

    const auto upper = scheme.manifold_indices(Manifold::Excited);
    std::vector<int> ground;
    for (Manifold m : {Manifold::GroundF1, Manifold::GroundF2})
        for (int i : scheme.manifold_indices(m)) ground.push_back(i);

    for (int u : upper) {
        double total = 0.0;
        for (int g : ground) {
            const double d = dipoles.amplitude(g, u);
            total += d * d;
        }
        if (total == 0.0) continue;
        for (int g : ground) {
            const double d = dipoles.amplitude(g, u);
            if (d == 0.0) continue;
            CMatrix A = CMatrix::Zero(n, n);
            A(g, u) = 1.0;
            out.push_back({std::move(A), Gamma * d * d / total});
        }
    }

    if (params.population_model == PopulationModel::FullPumping &&
        params.ground_mixing_rate_mhz > 0.0) {
        const double r = params.ground_mixing_rate_mhz / static_cast<double>(ground.size());
        for (int g : ground) {
            for (int gp : ground) {
                if (g == gp) continue;
                CMatrix A = CMatrix::Zero(n, n);
                A(g, gp) = 1.0;
                out.push_back({std::move(A), r});
            }
        }
    }
    return out;
}

// Extra coherence decay beyond spontaneous emission: gamma_ab on ground-ground
// pairs across the two hyperfine manifolds, and laser-linewidth dephasing
// (probe FWHM on a-c pairs, coupling FWHM on b-c pairs, both on a-b pairs).
inline Eigen::MatrixXd dephasing_rates(const LevelScheme& scheme,
                                       const std::vector<FieldConfig>& fields,
                                       const ModelParams& params) {
    const int n = scheme.size();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    const FieldConfig* probe = find_field(fields, FieldRole::Probe);
    const FieldConfig* coupling = find_field(fields, FieldRole::Coupling);
    const double bp = probe ? probe->linewidth_mhz : 0.0;
    const double bc = coupling ? coupling->linewidth_mhz : 0.0;

    auto pair_rate = [&](Manifold a, Manifold b) -> double {
        auto is = [](Manifold x, Manifold y, Manifold m1, Manifold m2) {
            return (x == m1 && y == m2) || (x == m2 && y == m1);
        };
        if (is(a, b, Manifold::GroundF1, Manifold::Excited)) return bp;
        if (is(a, b, Manifold::GroundF2, Manifold::Excited)) return bc;
        if (is(a, b, Manifold::GroundF1, Manifold::GroundF2))
            return params.gamma_ab_mhz + bp + bc;
        return 0.0;
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double r = pair_rate(scheme.states[i].manifold, scheme.states[j].manifold);
            k(i, j) = r;
            k(j, i) = r;
        }
    return k;
}

// Column-major vectorization index of rho(r, c).
inline int vec_index(int r, int c, int n) { return r + n * c; }

// L acting on vec(rho): -i[H,rho] + sum_k rate_k D[A_k](rho) minus the pure
// dephasing rates on off-diagonal elements. Trace-conserving by construction.
inline CMatrix assemble_liouvillian(const CMatrix& H, const std::vector<Dissipator>& dissipators,
                                    const Eigen::MatrixXd& dephasing) {
    const int n = static_cast<int>(H.rows());
    if (H.cols() != n || dephasing.rows() != n || dephasing.cols() != n)
        throw std::invalid_argument("assemble_liouvillian: dimension mismatch");
    const int n2 = n * n;
    CMatrix L = CMatrix::Zero(n2, n2);
    const Complex I(0.0, 1.0);

    // -i (H rho - rho H)
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) {
                if (H(r, k) != 0.0) L(vec_index(r, c, n), vec_index(k, c, n)) -= I * H(r, k);
                if (H(k, c) != 0.0) L(vec_index(r, c, n), vec_index(r, k, n)) += I * H(k, c);
            }

    for (const auto& dis : dissipators) {
        if (dis.op.rows() != n || dis.op.cols() != n)
            throw std::invalid_argument("assemble_liouvillian: dissipator dimension mismatch");
        const CMatrix& A = dis.op;
        const CMatrix M = A.adjoint() * A;
        const double rate = dis.rate_mhz;
        // rate * A rho A^dag
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) {
                if (A(r, k) == 0.0) continue;
                for (int c = 0; c < n; ++c)
                    for (int l = 0; l < n; ++l) {
                        if (A(c, l) == 0.0) continue;
                        L(vec_index(r, c, n), vec_index(k, l, n)) +=
                            rate * A(r, k) * std::conj(A(c, l));
                    }
            }
        // -rate/2 {A^dag A, rho}
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r)
                for (int k = 0; k < n; ++k) {
                    if (M(r, k) != 0.0)
                        L(vec_index(r, c, n), vec_index(k, c, n)) -= 0.5 * rate * M(r, k);
                    if (M(k, c) != 0.0)
                        L(vec_index(r, c, n), vec_index(r, k, n)) -= 0.5 * rate * M(k, c);
                }
    }

    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            if (r != c && dephasing(r, c) != 0.0)
                L(vec_index(r, c, n), vec_index(r, c, n)) -= dephasing(r, c);

    return L;
}

inline void validate_density_matrix(const CMatrix& rho, double herm_tol = 1e-10,
                                    double trace_tol = 1e-10, double pos_tol = 1e-12) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol) throw SolverError("density matrix not Hermitian (max dev " +
                                           std::to_string(herm) + ")");
    const Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > trace_tol)
        throw SolverError("density matrix trace deviates from 1 by " +
                          std::to_string(std::abs(tr - 1.0)));
    for (int i = 0; i < rho.rows(); ++i)
        if (rho(i, i).real() < -pos_tol)
            throw SolverError("negative population " + std::to_string(rho(i, i).real()));
}

// Unique steady state of a trace-conserving Liouvillian: solves L rho = 0 with
// one scalar equation replaced by Tr rho = 1. Throws SolverError if the system
// is singular beyond the trace degeneracy (dark-state trapping: enable the
// ground mixing rate).
inline CMatrix steady_state(const CMatrix& L) {
    const int n2 = static_cast<int>(L.rows());
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
    if (n * n != n2 || L.cols() != n2)
        throw std::invalid_argument("steady_state: Liouvillian must be n^2 x n^2");

    CMatrix A = L;
    A.row(0).setZero();
    for (int i = 0; i < n; ++i) A(0, vec_index(i, i, n)) = 1.0;
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n2);
    b(0) = 1.0;

    // Full pivoting: a degenerate kernel (dark-state trapping) must be
    // detected even when one of its members happens to solve the system.
    Eigen::FullPivLU<CMatrix> lu(A);
    if (!lu.isInvertible())
        throw SolverError(
            "Liouvillian is singular beyond the trace degeneracy (dark-state "
            "degeneracy: enable ground mixing)");
    Eigen::VectorXcd x = lu.solve(b);
    if (!x.allFinite()) throw SolverError("steady state solve produced non-finite values");

    const double residual = (L * x).cwiseAbs().maxCoeff();
    if (residual > 1e-9)
        throw SolverError("steady state residual " + std::to_string(residual) + " MHz");

    CMatrix rho(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) rho(r, c) = x(vec_index(r, c, n));
    validate_density_matrix(rho);
    return 0.5 * (rho + CMatrix(rho.adjoint()));
}

// One probe-driven transition a -> c with its pi-coupled partner b.
struct ProbeTransition {
    int a_idx = -1;
    int c_idx = -1;
    int b_idx = -1;       // ground partner of c under the pi coupling
    int q = 0;            // probe spherical component
    int channel = 0;      // 1: |m'|=2, 2: |m'|=1, 3: m'=0
    double d_probe = 0.0;
    double d_coupling = 0.0;  // zero when the partner transition is forbidden
};

// The sigma+- probe transitions out of the F=1 manifold, grouped into the
// three susceptibility channels by |m| of the upper state.
inline std::vector<ProbeTransition> probe_transitions(const LevelScheme& scheme,
                                                      const DipoleTable& dipoles) {
    std::vector<ProbeTransition> out;
    for (int a : scheme.manifold_indices(Manifold::GroundF1)) {
        for (int q : {-1, +1}) {
            const int mc = scheme.states[a].m + q;
            if (std::abs(mc) > scheme.excited_F) continue;
            ProbeTransition t;
            t.a_idx = a;
            t.q = q;
            for (int c : scheme.manifold_indices(Manifold::Excited))
                if (scheme.states[c].m == mc) t.c_idx = c;
            t.d_probe = dipoles.amplitude(t.a_idx, t.c_idx);
            if (t.d_probe == 0.0) continue;
            for (int b : scheme.manifold_indices(Manifold::GroundF2))
                if (scheme.states[b].m == mc) t.b_idx = b;
            t.d_coupling = t.b_idx >= 0 ? dipoles.amplitude(t.b_idx, t.c_idx) : 0.0;
            t.channel = 3 - std::abs(mc);
            out.push_back(t);
        }
    }
    return out;
}

inline bool probe_is_weak(const std::vector<FieldConfig>& fields) {
    const FieldConfig* probe = find_field(fields, FieldRole::Probe);
    const FieldConfig* coupling = find_field(fields, FieldRole::Coupling);
    if (!probe || !coupling || coupling->rabi_scale_mhz == 0.0) return true;
    return probe->rabi_scale_mhz <= 0.2 * coupling->rabi_scale_mhz;
}

struct LinearResponse {
    std::vector<ProbeTransition> transitions;
    std::vector<Complex> coherence;  // <c|rho|a> per transition, first order in the probe
};

// First-order-in-probe steady-state optical coherences of every probe channel,
// with the ground population fixed at 1/3 per F=1 sublevel. Each channel is a
// closed pair (optical coherence, two-photon coherence) coupled through its
// pi coupling Rabi frequency.
inline LinearResponse linear_response_coherences(const LevelScheme& scheme,
                                                 const DipoleTable& dipoles,
                                                 const std::vector<FieldConfig>& fields,
                                                 const ModelParams& params, double delta_p) {
    params.validate();
    const FieldConfig* probe = find_field(fields, FieldRole::Probe);
    if (!probe) throw std::invalid_argument("linear response requires a probe field");
    probe->validate();
    const FieldConfig* coupling = find_field(fields, FieldRole::Coupling);
    if (coupling) {
        coupling->validate();
        if (coupling->pol_weight(-1) != 0.0 || coupling->pol_weight(+1) != 0.0)
            throw std::invalid_argument("linear response requires a pi-polarized coupling");
    }

    const double delta_c = coupling ? coupling->detuning_mhz : 0.0;
    const double omega_c_scale = coupling ? coupling->rabi_scale_mhz : 0.0;
    const double w_pi = coupling ? coupling->pol_weight(0) : 0.0;
    const double bp = probe->linewidth_mhz;
    const double bc = coupling ? coupling->linewidth_mhz : 0.0;
    const double gamma_oc = params.gamma_ac_mhz + bp;
    const double gamma_tp = params.gamma_ab_mhz + bp + bc;
    const double pop_a =
        1.0 / static_cast<double>(scheme.manifold_indices(Manifold::GroundF1).size());
    const Complex I(0.0, 1.0);

    LinearResponse lr;
    lr.transitions = probe_transitions(scheme, dipoles);
    lr.coherence.reserve(lr.transitions.size());
    for (const auto& t : lr.transitions) {
        const ZeemanState& a = scheme.states[t.a_idx];
        const ZeemanState& c = scheme.states[t.c_idx];
        const double omega_p = t.d_probe * probe->rabi_scale_mhz * probe->pol_weight(t.q);
        const double omega_c = t.d_coupling * omega_c_scale * w_pi;
        const double det_oc = delta_p + a.zeeman_shift_mhz - c.zeeman_shift_mhz;

        Complex denom = gamma_oc - I * det_oc;
        bool dark = false;
        if (omega_c != 0.0) {
            const ZeemanState& b = scheme.states[t.b_idx];
            const double det_tp =
                delta_p - delta_c + a.zeeman_shift_mhz - b.zeeman_shift_mhz;
            if (gamma_tp == 0.0 && det_tp == 0.0)
                dark = true;  // lossless two-photon resonance: exact dark state
            else
                denom += 0.25 * omega_c * omega_c / (gamma_tp - I * det_tp);
        }
        lr.coherence.push_back(dark ? Complex(0.0)
                                    : -I * 0.5 * omega_p * pop_a / denom);
    }
    return lr;
}

// Steady state of the FixedEqualF1 model: the linear-response construction at
// full scale. Populations stay pinned at the equal F=1 mixture and the
// first-order coherence sector of the assembled Liouvillian is solved exactly.
inline CMatrix fixed_f1_response_state(const LevelScheme& scheme, const DipoleTable& dipoles,
                                       const std::vector<FieldConfig>& fields,
                                       const ModelParams& params) {
    const int n = scheme.size();
    const CMatrix H = assemble_hamiltonian(scheme, dipoles, fields);
    const auto dissipators = assemble_dissipators(scheme, dipoles, params);
    const Eigen::MatrixXd dephasing = dephasing_rates(scheme, fields, params);
    const CMatrix L = assemble_liouvillian(H, dissipators, dephasing);

    CMatrix rho0 = CMatrix::Zero(n, n);
    const auto a_states = scheme.manifold_indices(Manifold::GroundF1);
    for (int a : a_states) rho0(a, a) = 1.0 / static_cast<double>(a_states.size());

    // Coherence sector: (a, x) with a in F=1 and x in F=2 or excited. At first
    // order in the probe the Liouvillian closes on this sector.
    std::vector<int> sector;
    for (int a : a_states)
        for (int x = 0; x < n; ++x)
            if (scheme.states[x].manifold != Manifold::GroundF1)
                sector.push_back(vec_index(a, x, n));

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n * n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) rhs(vec_index(r, c, n)) = rho0(r, c);
    rhs = -(L * rhs);

    const int m = static_cast<int>(sector.size());
    CMatrix A(m, m);
    Eigen::VectorXcd b(m);
    for (int i = 0; i < m; ++i) {
        b(i) = rhs(sector[i]);
        for (int j = 0; j < m; ++j) A(i, j) = L(sector[i], sector[j]);
    }
    Eigen::VectorXcd y = A.partialPivLu().solve(b);
    if (!y.allFinite())
        throw SolverError("linear-response sector solve failed (vanishing coherence decay?)");

    CMatrix rho = rho0;
    for (int i = 0; i < m; ++i) {
        const int r = sector[i] % n;
        const int c = sector[i] / n;
        rho(r, c) = y(i);
        rho(c, r) = std::conj(y(i));
    }
    return rho;
}

// Steady state under the configured population model, probe detuning taken
// from the probe field.
inline CMatrix solve_steady_state(const LevelScheme& scheme, const DipoleTable& dipoles,
                                  const std::vector<FieldConfig>& fields,
                                  const ModelParams& params) {
    if (params.population_model == PopulationModel::FixedEqualF1)
        return fixed_f1_response_state(scheme, dipoles, fields, params);
    const CMatrix H = assemble_hamiltonian(scheme, dipoles, fields);
    const CMatrix L = assemble_liouvillian(H, assemble_dissipators(scheme, dipoles, params),
                                           dephasing_rates(scheme, fields, params));
    return steady_state(L);
}

}  // namespace mdsr
