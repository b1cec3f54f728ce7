#include "lindkit/core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace lindkit {

Vec vectorize(const Mat& a) {
    require(a.rows() == a.cols(), "vectorize: matrix must be square");
    const Eigen::Index d = a.rows();
    Vec v(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) v(vec_index(i, j, d)) = a(i, j);
    return v;
}

Mat devectorize(const Vec& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    require(d * d == v.size(), "devectorize: length is not a perfect square");
    return devectorize(v, d);
}

Mat devectorize(const Vec& v, Eigen::Index dim) {
    require(dim * dim == v.size(), "devectorize: dimension mismatch");
    Mat a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = v(vec_index(i, j, dim));
    return a;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

SuperOp sandwich(const Mat& a, const Mat& b) {
    require(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(),
            "sandwich: operators must be square and of equal dimension");
    return kron(a, b.transpose());
}

SuperOp hamiltonian_superop(const Mat& h) {
    const Eigen::Index d = h.rows();
    const Mat id = Mat::Identity(d, d);
    return -I_UNIT * (sandwich(h, id) - sandwich(id, h));
}

std::vector<Mat> hermitian_basis(Eigen::Index dim) {
    require(dim >= 1, "hermitian_basis: dim must be positive");
    std::vector<Mat> basis;
    basis.reserve(static_cast<size_t>(dim * dim));
    basis.push_back(Mat::Identity(dim, dim) / std::sqrt(double(dim)));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = j + 1; k < dim; ++k) {
            Mat sym = Mat::Zero(dim, dim);
            sym(j, k) = inv_sqrt2;
            sym(k, j) = inv_sqrt2;
            basis.push_back(sym);
            Mat asym = Mat::Zero(dim, dim);
            asym(j, k) = -I_UNIT * inv_sqrt2;
            asym(k, j) = I_UNIT * inv_sqrt2;
            basis.push_back(asym);
        }
    }
    for (Eigen::Index l = 1; l < dim; ++l) {
        Mat diag = Mat::Zero(dim, dim);
        const double f = 1.0 / std::sqrt(double(l * (l + 1)));
        for (Eigen::Index j = 0; j < l; ++j) diag(j, j) = f;
        diag(l, l) = -double(l) * f;
        basis.push_back(diag);
    }
    return basis;
}

Mat partial_trace(const Mat& a, const std::vector<Eigen::Index>& factor_dims, int which) {
    Eigen::Index total = 1;
    for (auto d : factor_dims) total *= d;
    require(a.rows() == total && a.cols() == total, "partial_trace: dimension mismatch");
    require(which >= 0 && which < static_cast<int>(factor_dims.size()),
            "partial_trace: bad factor index");

    const Eigen::Index dt = factor_dims[static_cast<size_t>(which)];
    Eigen::Index left = 1, right = 1;
    for (int f = 0; f < which; ++f) left *= factor_dims[static_cast<size_t>(f)];
    for (size_t f = static_cast<size_t>(which) + 1; f < factor_dims.size(); ++f)
        right *= factor_dims[f];

    Mat out = Mat::Zero(left * right, left * right);
    for (Eigen::Index l1 = 0; l1 < left; ++l1)
        for (Eigen::Index r1 = 0; r1 < right; ++r1)
            for (Eigen::Index l2 = 0; l2 < left; ++l2)
                for (Eigen::Index r2 = 0; r2 < right; ++r2) {
                    cxd s = 0.0;
                    for (Eigen::Index t = 0; t < dt; ++t)
                        s += a((l1 * dt + t) * right + r1, (l2 * dt + t) * right + r2);
                    out(l1 * right + r1, l2 * right + r2) = s;
                }
    return out;
}

FockSpace::FockSpace(Eigen::Index n_max_) : n_max(n_max_), dim(n_max_ + 1) {
    require(n_max_ >= 0, "FockSpace: n_max must be non-negative");
    a = Mat::Zero(dim, dim);
    for (Eigen::Index k = 0; k + 1 < dim; ++k) a(k, k + 1) = std::sqrt(double(k + 1));
    adag = a.adjoint();
    n = adag * a;
}

TruncatedState coherent_state(cxd alpha, Eigen::Index n_max) {
    const Eigen::Index dim = n_max + 1;
    Vec amps(dim);
    // log-scaled recursion keeps the coefficients stable for large |alpha|
    double log_norm = -0.5 * std::norm(alpha);
    cxd phase = 1.0;
    double log_mag = 0.0;
    double kept = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (k > 0) {
            phase *= alpha / std::abs(alpha == 0.0 ? cxd(1.0) : alpha);
            log_mag += std::log(std::abs(alpha)) - 0.5 * std::log(double(k));
        }
        cxd c = (k == 0) ? std::exp(cxd(log_norm, 0.0))
                         : phase * std::exp(log_norm + log_mag);
        if (alpha == 0.0 && k > 0) c = 0.0;
        amps(k) = c;
        kept += std::norm(c);
    }
    TruncatedState st;
    st.tail_mass = std::max(0.0, 1.0 - kept);
    const double nrm = std::sqrt(kept);
    st.amplitudes = (nrm > 0) ? Vec(amps / nrm) : amps;
    return st;
}

Mat mod_projector(Eigen::Index k, Eigen::Index modulus, Eigen::Index n_max) {
    require(modulus >= 1 && k >= 0 && k < modulus, "mod_projector: bad residue class");
    Mat p = Mat::Zero(n_max + 1, n_max + 1);
    for (Eigen::Index n = k; n <= n_max; n += modulus) p(n, n) = 1.0;
    return p;
}

Mat displacement(cxd alpha, Eigen::Index n_max) {
    FockSpace fock(n_max);
    Mat gen = alpha * fock.adag - std::conj(alpha) * fock.a;
    return gen.exp();
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, -I_UNIT, I_UNIT, 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Mat identity(Eigen::Index dim) { return Mat::Identity(dim, dim); }

}  // namespace lindkit
