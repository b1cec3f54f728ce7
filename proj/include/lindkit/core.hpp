#pragma once

// Dense operator/superoperator bridge: vectorization, Hilbert-Schmidt
// geometry, Hermitian matrix bases and elementary Hilbert-space builders
// (qubits, truncated Fock space, tensor products).
//
// Vectorization convention, fixed once for the whole library: an operator is
// flattened row by row, i.e. |i><j| maps to the unit vector with index
// i*dim + j.  The bra side is transposed, so the sandwich A rho B acts on the
// flattened state as kron(A, B^T).

#include "lindkit/types.hpp"

namespace lindkit {

inline Eigen::Index vec_index(Eigen::Index i, Eigen::Index j, Eigen::Index dim) {
    return i * dim + j;
}

Vec vectorize(const Mat& a);
Mat devectorize(const Vec& v);
Mat devectorize(const Vec& v, Eigen::Index dim);

/// kron(a, b) with row-major block layout; also the tensor product of operators.
Mat kron(const Mat& a, const Mat& b);
inline Mat tensor(const Mat& a, const Mat& b) { return kron(a, b); }

/// Superoperator for rho -> A rho B.
SuperOp sandwich(const Mat& a, const Mat& b);

/// Superoperator for rho -> [H, rho] scaled by -i, i.e. the Hamiltonian part.
SuperOp hamiltonian_superop(const Mat& h);

inline cxd hs_inner(const Mat& a, const Mat& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "hs_inner: dimension mismatch");
    return (a.adjoint() * b).trace();
}

inline double frobenius_norm(const Mat& a) { return a.norm(); }

inline SuperOp superop_adjoint(const SuperOp& o) { return o.adjoint(); }

/// Orthonormal Hermitian matrix basis (generalized Gell-Mann set).
/// Element 0 is I/sqrt(dim); off-diagonal pairs and shifted diagonals follow.
std::vector<Mat> hermitian_basis(Eigen::Index dim);

/// Trace out one tensor factor.  factor_dims lists the dimension of every
/// factor in order; `which` is the index of the factor to remove.
Mat partial_trace(const Mat& a, const std::vector<Eigen::Index>& factor_dims, int which);

struct FockSpace {
    explicit FockSpace(Eigen::Index n_max);
    Eigen::Index n_max;
    Eigen::Index dim;   // n_max + 1
    Mat a;              // lowering operator, <n|a|n+1> = sqrt(n+1)
    Mat adag;           // exact matrix adjoint of a on the truncated space
    Mat n;              // number operator
};

struct TruncatedState {
    Vec amplitudes;    // normalized on the truncated space
    double tail_mass;  // weight of the discarded tail of the exact state
};

/// Coherent state |alpha> truncated at n_max.
TruncatedState coherent_state(cxd alpha, Eigen::Index n_max);

/// Projector onto occupation numbers congruent to k modulo `modulus`.
Mat mod_projector(Eigen::Index k, Eigen::Index modulus, Eigen::Index n_max);

/// Displacement operator exp(alpha a^dag - conj(alpha) a) on the truncated space.
Mat displacement(cxd alpha, Eigen::Index n_max);

// Pauli and small-space helpers.
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat identity(Eigen::Index dim);

}  // namespace lindkit
