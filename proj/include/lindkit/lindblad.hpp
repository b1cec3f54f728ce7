#pragma once

// Lindbladian construction, adjoints, gauge transforms, spectra and time
// evolution on the dense superoperator representation.

#include "lindkit/core.hpp"

#include <optional>

namespace lindkit {

struct Jump {
    Mat op;
    double rate = 1.0;
};

struct LindbladSpec {
    Mat hamiltonian;          // Hermitian, units of rate
    std::vector<Jump> jumps;  // (jump operator, positive rate)

    Eigen::Index dim() const { return hamiltonian.rows(); }
    void validate(double herm_tol = 1e-12) const;
};

LindbladSpec make_spec(const Mat& h, std::vector<Jump> jumps);
LindbladSpec jump_only(const Mat& f, double rate = 1.0);

/// L(rho) = -i[H,rho] + 1/2 sum_l k_l (2 F rho F^dag - F^dag F rho - rho F^dag F)
SuperOp build_superop(const LindbladSpec& spec);

/// Heisenberg-picture generator; equals superop_adjoint(build_superop(spec)).
SuperOp build_adjoint(const LindbladSpec& spec);

/// Apply L to a matrix without materializing the superoperator.
Mat apply_lindblad(const LindbladSpec& spec, const Mat& rho);
Mat apply_adjoint(const LindbladSpec& spec, const Mat& a);

/// Shift of jump operators by complex constants, compensated in the
/// Hamiltonian so the superoperator is unchanged.
LindbladSpec gauge_transform(const LindbladSpec& spec, const std::vector<cxd>& g);

struct EigenCluster {
    cxd value;                        // representative eigenvalue
    std::vector<Eigen::Index> members;  // indices into the flat eigenvector list
    bool defective = false;           // true when the cluster lacks a full eigenbasis
};

struct SpectrumResult {
    Vec eigenvalues;                   // all dim^2 of them
    SuperOp right_vectors;             // columns, same order as eigenvalues
    std::vector<EigenCluster> clusters;
    double scale = 0.0;                // max |eigenvalue|, used by the thresholds
    double zero_tol = 0.0;             // absolute peripheral threshold

    bool is_peripheral(const EigenCluster& c) const {
        return std::abs(c.value.real()) <= zero_tol;
    }
};

SpectrumResult spectrum(const SuperOp& l, const Tolerances& tol = {});

/// exp(t L) applied to rho_in by scaling-and-squaring on the dense superoperator.
Mat propagate(const SuperOp& l, const Mat& rho_in, double t);

/// Smallest |Re| over eigenvalue clusters with nonzero real part.
double dissipative_gap(const SuperOp& l, const Tolerances& tol = {});
double dissipative_gap(const SpectrumResult& spec);

/// Matrix of L in a Hermitian operator basis; real for any Lindbladian,
/// antisymmetric exactly when L generates unitary evolution.
RMat real_basis_matrix(const SuperOp& l, const std::vector<Mat>& basis,
                       double* max_imag = nullptr);
bool is_unitary_generator(const SuperOp& l, const std::vector<Mat>& basis,
                          double tol = 1e-9);

/// Matrix of L restricted to the invariant subspace spanned by outer
/// products |i><j| with i in rows, j in cols.  The caller is responsible for
/// invariance (e.g. a symmetry sector); the routine does not check it.
Mat sector_block(const LindbladSpec& spec, const std::vector<Eigen::Index>& rows,
                 const std::vector<Eigen::Index>& cols);

}  // namespace lindkit
