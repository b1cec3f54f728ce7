#pragma once

// Drazin pseudoinverse, corner-resolved Kubo response, effective Hamiltonians
// for Hamiltonian/jump-shift perturbations, the exact all-order Dyson series
// over Catalan sequences, and the second-order effective generator with its
// effective-operator-formalism cross-check.

#include "lindkit/asymptotics.hpp"

namespace lindkit {

struct PerturbationSpec {
    enum class Kind { Hamiltonian, JumpShift, Raw };
    Kind kind = Kind::Hamiltonian;
    Mat v;                 // Hamiltonian kind: Hermitian perturbation
    size_t jump_index = 0; // JumpShift kind: which jump of the base spec
    Mat f;                 // JumpShift kind: F -> F + f
    SuperOp raw;           // Raw kind
    bool trace_preserving = true;

    static PerturbationSpec hamiltonian(const Mat& v);
    static PerturbationSpec jump_shift(size_t jump_index, const Mat& f);
    static PerturbationSpec raw_superop(const SuperOp& o, bool trace_preserving = true);

    SuperOp to_superop(const LindbladSpec& base) const;
    Mat apply(const LindbladSpec& base, const Mat& rho) const;
};

/// Drazin pseudoinverse: inverse of L off its peripheral eigenspace,
/// L^D L = L L^D = Q_inf and L^D = Q_inf L^D Q_inf.
SuperOp drazin_inverse(const SuperOp& l, const AsymptoticProjector& proj);

/// Resolvent variant (L - i delta)^{-1} restricted off the i*delta eigenspace.
SuperOp shifted_drazin_inverse(const SuperOp& l, const AsymptoticBasis& basis, double delta);

/// Drazin-type inverse of L restricted to the ul+ur+ll rows (the block
/// relevant for leakage); returns a full-size superoperator vanishing on lr.
SuperOp thu_drazin_inverse(const SuperOp& l, const CornerSplit& split,
                           const AsymptoticProjector& proj);

struct KuboResult {
    cxd zeno = 0.0;      // <<A|Pinf O Pinf|rho>>, multiplies t (and 1/eta)
    cxd leakage = 0.0;   // <<A|L_thu^-1 O|rho>>
    cxd ringdown = 0.0;  // sudden-ramp extra <<A|e^{tL} L^-1 O|rho>>, else 0
    cxd value = 0.0;     // t * zeno - leakage (+ ringdown when sudden)
};

/// First-order response of a steady state to a slowly ramped perturbation.
/// With `sudden` the ramp is a step and the ringdown term replaces the 1/eta
/// secular piece.
KuboResult kubo_first_order(const SuperOp& l, const CornerSplit& split,
                            const AsymptoticProjector& proj, const SuperOp& o,
                            const Mat& a, const Mat& rho_inf, double t,
                            bool sudden = false);

/// Matrix of Pinf O Pinf over the asymptotic basis:
/// Z[(mu),(nu)] = <<J_mu|O|Psi_nu>>.
Mat zeno_matrix(const AsymptoticBasis& basis, const SuperOp& o);

/// Effective Hamiltonian on the DFS factor of one NS block.
/// Hamiltonian kind: W = tr_ax{rho_ax V_ul}; jump-shift kind:
/// Y = (i/2) kappa tr_ax{rho_ax (F_ul^dag f_ul - f_ul^dag F_ul)}; a combined
/// perturbation yields X = W + Y.
Mat effective_hamiltonian(const LindbladSpec& base, const CornerSplit& split,
                          const NsBlock& block, const PerturbationSpec& pert);

/// Entry C(N, M) of Catalan's triangle; C(N, N) is the Catalan number C_N.
long long catalan_triangle(int n, int m);
long long catalan_number(int n);

/// All sequences of Cat^N_M in canonical order: ascending M groups are
/// emitted by enumerate_order(); within one (N, M) class the sequences are
/// sorted by descending number of nonzero entries, then lexicographically.
std::vector<std::vector<int>> enumerate_sequences(int n, int m);

struct DysonTermInfo {
    std::vector<int> seq;
    int m = 0;         // sum of the sequence
    int sign = +1;     // (-1)^(number of nonzero entries)
    int t_power = 0;   // N - M
};

/// Term list for order N in canonical order (used by the CLI table).
std::vector<DysonTermInfo> dyson_term_table(int n);

struct DysonOrder {
    SuperOp regular;  // sum of terms, t-powers evaluated at the given t
    SuperOp secular;  // coefficient of 1/eta (d/dt image of the regular part)
    std::vector<DysonTermInfo> terms;
};

/// N-th order term of the exact Dyson expansion for a slow ramp, composed
/// with Pinf on the right (initial state restricted to the asymptotic
/// subspace).  Requires the stationary case (all deltas zero).
DysonOrder dyson_term(const SuperOp& l, const AsymptoticProjector& proj, const SuperOp& o,
                      int n, double t);

/// L_eff = -Pinf O L_thu^-1 O P_Psi, the first nonunitary correction.
SuperOp second_order_leff(const SuperOp& l, const CornerSplit& split,
                          const AsymptoticProjector& proj, const SuperOp& o);

/// Effective operator formalism for F = F_ur, H = H_lr, V = V_of:
/// H_eff = -1/2 V (K^-1 + K^-1 dag) V and F_eff = F K^-1 V_ll with
/// K = H - (i/2) sum_l kappa_l F^dag F.
LindbladSpec effective_operator_formalism(const LindbladSpec& spec, const CornerSplit& split,
                                          const Mat& v);

}  // namespace lindkit
