#pragma once

// Four-corners decomposition: the non-decaying projector P, the induced
// superprojections, the block partition of L and the effective dissipative
// gap computed from an explicit change of basis adapted to the split.

#include "lindkit/lindblad.hpp"

namespace lindkit {

enum class Corner { UL, UR, LL, LR };

struct CornerSplit {
    Mat p, q;        // orthogonal projectors on the Hilbert space, p + q = I
    Mat frame;       // unitary; first `rank` columns span range(p)
    Eigen::Index rank = 0;
    Eigen::Index dim = 0;

    Mat to_adapted(const Mat& a) const { return frame.adjoint() * a * frame; }
    Mat from_adapted(const Mat& a) const { return frame * a * frame.adjoint(); }

    bool in_corner(Corner c, Eigen::Index i, Eigen::Index j) const;
    std::vector<Eigen::Index> corner_pairs(Corner c) const;  // adapted vec indices

    SuperOp r_ul() const { return sandwich(p, p); }
    SuperOp r_ur() const { return sandwich(p, q); }
    SuperOp r_ll() const { return sandwich(q, p); }
    SuperOp r_lr() const { return sandwich(q, q); }
    SuperOp r_of() const { return r_ur() + r_ll(); }
    SuperOp r_di() const { return r_ul() + r_lr(); }
    SuperOp r_thu() const;  // identity minus r_lr

    Mat project(Corner c, const Mat& a) const;
};

/// Build a split from an explicit Hermitian projector (used by tests and by
/// models that know P analytically).
CornerSplit make_corner_split(const Mat& p, double tol = 1e-9);

struct SupportReport {
    double smallest_kept = 0.0;    // smallest eigenvalue counted into P
    double largest_dropped = 0.0;  // largest eigenvalue treated as zero
    double conditioning() const {
        return largest_dropped > 0 ? smallest_kept / largest_dropped
                                   : std::numeric_limits<double>::infinity();
    }
};

/// P = spectral support of Pinf(I); eigenvalues below tol.rank * max are zero.
/// `report`, when given, receives the borderline diagnostics.
CornerSplit find_nondecay_projector(const SuperOp& l, const Tolerances& tol = {},
                                    SupportReport* report = nullptr);

struct BlockPartition {
    // blocks[r][c] = R_r L R_c with r, c running over {ul, of, lr}
    SuperOp blocks[3][3];
    SuperOp l_ul, l_of, l_lr;
    SuperOp transfer;                    // R_ul L R_lr
    double lower_residual = 0.0;         // max norm of the three vanishing blocks
};

BlockPartition partition(const SuperOp& l, const CornerSplit& split);

struct DecayReport {
    std::vector<double> f_ll_norms;  // per jump, should vanish
    double h_ur_residual = 0.0;      // ||H_ur + (i/2) sum_l k_l F_ul^dag F_ur||
    double max_residual() const;
};

/// Checks of the structural conditions under which L admits the split.
DecayReport verify_decay_conditions(const LindbladSpec& spec, const CornerSplit& split);

/// Smallest |Re| of the nonzero eigenvalues of L restricted to the ul+ur
/// rows (sub-matrix in the adapted basis, not a masked full matrix).
double effective_dissipative_gap(const LindbladSpec& spec, const CornerSplit& split,
                                 const Tolerances& tol = {});

/// H_edg = 1/2 sum_l kappa_l F^dag F; for a semisimple DFS its excitation gap
/// equals the effective dissipative gap.
Mat decoherence_hamiltonian(const LindbladSpec& spec);

/// True when rescaling all rates leaves P unchanged on this instance.
bool is_kappa_robust(const LindbladSpec& spec, const CornerSplit& split,
                     const Tolerances& tol = {});

}  // namespace lindkit
