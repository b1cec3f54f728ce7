#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lindkit {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;   // operator on the Hilbert space, dim x dim
using Vec = Eigen::VectorXcd;   // vectorized operator, dim^2
using SuperOp = Eigen::MatrixXcd;  // dim^2 x dim^2
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

constexpr cxd I_UNIT{0.0, 1.0};

// Thrown when a linear-algebra step cannot produce a trustworthy answer
// (singular restricted operator, defective peripheral cluster, ...).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a Fock-space construction leaves too much weight above n_max.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

struct Tolerances {
    // Peripheral-spectrum threshold, relative to max |eigenvalue|.
    double zero_scale = 1e-9;
    // Eigenvalue clustering radius, relative to max |eigenvalue|.
    double cluster_scale = 1e-7;
    // Biorthogonality defect allowed after Gram correction.
    double biortho = 1e-8;
    // Rank cut for positive semidefinite support decisions, relative to the
    // largest eigenvalue.
    double rank = 1e-8;
    // Tail-mass warning threshold for truncated Fock constructions.
    double tail_mass = 1e-10;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace lindkit
