#pragma once

// Steady-state bases and conserved quantities (spectral and analytic-formula
// routes), the asymptotic projection, infinite-time states and the structure
// classification of the asymptotic subspace.

#include "lindkit/corners.hpp"

#include <optional>

namespace lindkit {

struct AsymptoticEntry {
    double delta = 0.0;  // L Psi = i delta Psi,  L^ddag J = -i delta J
    Mat psi;
    Mat j;
};

struct AsymptoticBasis {
    Eigen::Index dim = 0;
    // Ordering: the Delta = 0 sector first, then (+Delta, -Delta) pairs with
    // Delta > 0 first, descending in Delta.  Psi_{-Delta} = Psi_{+Delta}^dag.
    std::vector<AsymptoticEntry> entries;

    Eigen::Index size() const { return static_cast<Eigen::Index>(entries.size()); }
    std::vector<Eigen::Index> stationary() const;  // indices with delta == 0
    SuperOp projector() const;                     // Pinf = sum |Psi>><<J|
};

struct PeripheralSector {
    double delta = 0.0;
    std::vector<Mat> ops;
};

/// Right peripheral eigenmatrices of L, grouped by Delta.
std::vector<PeripheralSector> steady_basis(const SuperOp& l, const Tolerances& tol = {});

/// Left peripheral eigenmatrices (conserved quantities before pairing);
/// sector with label delta holds solutions of L^ddag J = -i delta J.
std::vector<PeripheralSector> conserved_direct(const SuperOp& l, const Tolerances& tol = {});

/// Pair rights with lefts per Delta cluster so <<J|Psi>> = delta_{mu nu};
/// the Delta = 0 sector is turned into a Hermitian orthonormal basis.
AsymptoticBasis biorthogonalize(const std::vector<PeripheralSector>& rights,
                                const std::vector<PeripheralSector>& lefts,
                                const Tolerances& tol = {});

/// Full spectral pipeline: steady_basis + conserved_direct + biorthogonalize.
AsymptoticBasis asymptotic_basis(const SuperOp& l, const Tolerances& tol = {});

/// Analytic route of the conserved quantities: J = J_ul + J_lr with
/// J_lr = -(L_lr^ddag + i delta)^{-1} R_lr L^ddag (J_ul).
std::vector<Mat> conserved_analytic(const LindbladSpec& spec, const CornerSplit& split,
                                    const std::vector<Mat>& j_ul, double delta);

struct AsymptoticProjector {
    SuperOp p_inf;
    SuperOp p_psi;  // minimal projection, acts from the non-decaying corner
    SuperOp q_inf() const { return SuperOp::Identity(p_inf.rows(), p_inf.cols()) - p_inf; }
};

AsymptoticProjector asymptotic_projector(const AsymptoticBasis& basis);
AsymptoticProjector asymptotic_projector(const AsymptoticBasis& basis, const CornerSplit& split);

/// rho_inf(t) = sum c_{delta mu} e^{i delta t} Psi_{delta mu} with
/// c = <<J|rho_in>>; rho_in must be a density matrix.
Mat infinite_time_state(const AsymptoticBasis& basis, const Mat& rho_in, double t = 0.0);

enum class AshKind { Unique, ClassicalSimplex, DFS, NS, MultiBlock, Unclassified };

struct NsBlock {
    Eigen::Index dfs_dim = 0;       // d
    Eigen::Index aux_dim = 0;       // d_ax = rank(rho_ax)
    Mat block_projector;            // on the Hilbert space
    Mat rho_ax;                     // auxiliary steady state, trace one
    double n_ax = 1.0;              // sqrt(tr rho_ax^2)
    Mat p_ax;                       // auxiliary identity
    std::vector<Mat> psi_dfs;       // DFS factors of the block's Psi's
    std::vector<Eigen::Index> entry_indices;  // which basis entries live here
    Mat factor_frame;               // isometry to the dfs (x) aux product basis
    double residual = 0.0;
};

struct AshStructure {
    AshKind kind = AshKind::Unclassified;
    std::vector<NsBlock> blocks;
    double residual = 0.0;
    bool rotating_sectors_present = false;  // Delta != 0 entries were skipped
};

/// Detect unique / classical-simplex / DFS / NS / multi-block structure of
/// the stationary sector by factorization over the algebra of J_ul's.
AshStructure classify_structure(const AsymptoticBasis& basis, const CornerSplit& split,
                                const Tolerances& tol = {});

/// Embed a quantum channel (Kraus operators mapping range(Q) to range(P))
/// into a Lindbladian whose Pinf R_lr reproduces it.
LindbladSpec channel_embedding(const std::vector<Mat>& kraus, const CornerSplit& split,
                               double rate = 1.0, double tol = 1e-9);

struct NoetherReport {
    double conserved_residual = 0.0;   // ||L^ddag(J)||
    double commutant_residual = 0.0;   // max ||[J,H]||, ||[J,F_l]||
    double symmetry_residual = 0.0;    // ||U^ddag L U - L|| at a probe angle
    bool is_projector = false;
    bool conserved(double tol = 1e-8) const { return conserved_residual < tol; }
    bool commutes(double tol = 1e-8) const { return commutant_residual < tol; }
    bool symmetry(double tol = 1e-8) const { return symmetry_residual < tol; }
};

NoetherReport noether_checks(const LindbladSpec& spec, const Mat& j,
                             double probe_angle = 0.7317);

}  // namespace lindkit
