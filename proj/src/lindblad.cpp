#include "lindkit/lindblad.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lindkit {

void LindbladSpec::validate(double herm_tol) const {
    require(hamiltonian.rows() == hamiltonian.cols(), "LindbladSpec: H must be square");
    const double scale = std::max(1.0, hamiltonian.norm());
    if ((hamiltonian - hamiltonian.adjoint()).norm() > herm_tol * scale)
        throw std::invalid_argument("LindbladSpec: Hamiltonian is not Hermitian");
    for (const auto& j : jumps) {
        require(j.op.rows() == dim() && j.op.cols() == dim(),
                "LindbladSpec: jump dimension mismatch");
        if (!(j.rate > 0.0)) throw std::invalid_argument("LindbladSpec: rate must be positive");
    }
}

LindbladSpec make_spec(const Mat& h, std::vector<Jump> jumps) {
    LindbladSpec spec{h, std::move(jumps)};
    spec.validate();
    return spec;
}

LindbladSpec jump_only(const Mat& f, double rate) {
    return make_spec(Mat::Zero(f.rows(), f.cols()), {{f, rate}});
}

SuperOp build_superop(const LindbladSpec& spec) {
    spec.validate();
    const Eigen::Index d = spec.dim();
    const Mat id = Mat::Identity(d, d);
    SuperOp l = hamiltonian_superop(spec.hamiltonian);
    for (const auto& j : spec.jumps) {
        const Mat ff = j.op.adjoint() * j.op;
        l += j.rate * (sandwich(j.op, j.op.adjoint()) -
                       0.5 * (sandwich(ff, id) + sandwich(id, ff)));
    }
    return l;
}

SuperOp build_adjoint(const LindbladSpec& spec) {
    spec.validate();
    const Eigen::Index d = spec.dim();
    const Mat id = Mat::Identity(d, d);
    SuperOp l = I_UNIT * (sandwich(spec.hamiltonian, id) - sandwich(id, spec.hamiltonian));
    for (const auto& j : spec.jumps) {
        const Mat ff = j.op.adjoint() * j.op;
        l += j.rate * (sandwich(j.op.adjoint(), j.op) -
                       0.5 * (sandwich(ff, id) + sandwich(id, ff)));
    }
    return l;
}

Mat apply_lindblad(const LindbladSpec& spec, const Mat& rho) {
    Mat out = -I_UNIT * (spec.hamiltonian * rho - rho * spec.hamiltonian);
    for (const auto& j : spec.jumps) {
        const Mat frho = j.op * rho;
        const Mat ff = j.op.adjoint() * j.op;
        out += j.rate * (frho * j.op.adjoint() - 0.5 * (ff * rho + rho * ff));
    }
    return out;
}

Mat apply_adjoint(const LindbladSpec& spec, const Mat& a) {
    Mat out = I_UNIT * (spec.hamiltonian * a - a * spec.hamiltonian);
    for (const auto& j : spec.jumps) {
        const Mat ff = j.op.adjoint() * j.op;
        out += j.rate * (j.op.adjoint() * a * j.op - 0.5 * (ff * a + a * ff));
    }
    return out;
}

LindbladSpec gauge_transform(const LindbladSpec& spec, const std::vector<cxd>& g) {
    require(g.size() == spec.jumps.size(), "gauge_transform: one constant per jump");
    LindbladSpec out = spec;
    const Eigen::Index d = spec.dim();
    for (size_t l = 0; l < g.size(); ++l) {
        const Mat& f = spec.jumps[l].op;
        const double kappa = spec.jumps[l].rate;
        out.hamiltonian -= 0.5 * I_UNIT * kappa *
                           (std::conj(g[l]) * f - g[l] * f.adjoint());
        out.jumps[l].op = f + g[l] * Mat::Identity(d, d);
    }
    out.validate();
    return out;
}

SpectrumResult spectrum(const SuperOp& l, const Tolerances& tol) {
    Eigen::ComplexEigenSolver<SuperOp> solver(l, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectrum: complex eigensolver failed");

    SpectrumResult res;
    res.eigenvalues = solver.eigenvalues();
    res.right_vectors = solver.eigenvectors();
    res.scale = res.eigenvalues.cwiseAbs().maxCoeff();
    res.zero_tol = tol.zero_scale * std::max(res.scale, 1e-300);
    const double cluster_radius = tol.cluster_scale * std::max(res.scale, 1e-300);

    std::vector<Eigen::Index> order(static_cast<size_t>(res.eigenvalues.size()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const cxd va = res.eigenvalues(a), vb = res.eigenvalues(b);
        if (va.real() != vb.real()) return va.real() > vb.real();
        return va.imag() > vb.imag();
    });

    for (Eigen::Index idx : order) {
        const cxd v = res.eigenvalues(idx);
        bool placed = false;
        for (auto& c : res.clusters) {
            if (std::abs(c.value - v) <= cluster_radius) {
                c.members.push_back(idx);
                placed = true;
                break;
            }
        }
        if (!placed) res.clusters.push_back({v, {idx}, false});
    }
    // Use the cluster mean as the representative value.
    for (auto& c : res.clusters) {
        cxd mean = 0.0;
        for (auto m : c.members) mean += res.eigenvalues(m);
        c.value = mean / double(c.members.size());
        if (std::abs(c.value.real()) <= res.zero_tol) c.value = cxd(0.0, c.value.imag());
        // A peripheral cluster must carry a full set of eigenvectors; a
        // rank-deficient span flags a Jordan block.
        if (res.is_peripheral(c) && c.members.size() > 1) {
            Mat span(res.right_vectors.rows(), c.members.size());
            for (size_t k = 0; k < c.members.size(); ++k)
                span.col(static_cast<Eigen::Index>(k)) = res.right_vectors.col(c.members[k]);
            Eigen::JacobiSVD<Mat> svd(span);
            const double cond = svd.singularValues()(0) /
                                svd.singularValues()(svd.singularValues().size() - 1);
            if (!std::isfinite(cond) || cond > 1e10) c.defective = true;
        }
    }
    return res;
}

Mat propagate(const SuperOp& l, const Mat& rho_in, double t) {
    require(t >= 0.0, "propagate: t must be non-negative");
    if (t == 0.0) return rho_in;
    const SuperOp exp_tl = (t * l).exp();
    return devectorize(exp_tl * vectorize(rho_in), rho_in.rows());
}

double dissipative_gap(const SpectrumResult& spec) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& c : spec.clusters)
        if (!spec.is_peripheral(c)) gap = std::min(gap, std::abs(c.value.real()));
    if (!std::isfinite(gap))
        throw NumericalError("dissipative_gap: no decaying eigenvalues (unitary generator)");
    return gap;
}

double dissipative_gap(const SuperOp& l, const Tolerances& tol) {
    return dissipative_gap(spectrum(l, tol));
}

RMat real_basis_matrix(const SuperOp& l, const std::vector<Mat>& basis, double* max_imag) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    RMat m(n, n);
    double imag = 0.0;
    std::vector<Vec> vecs;
    vecs.reserve(basis.size());
    for (const auto& b : basis) vecs.push_back(vectorize(b));
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec li = l * vecs[static_cast<size_t>(i)];
        for (Eigen::Index k = 0; k < n; ++k) {
            const cxd e = vecs[static_cast<size_t>(k)].dot(li);
            m(k, i) = e.real();
            imag = std::max(imag, std::abs(e.imag()));
        }
    }
    if (max_imag) *max_imag = imag;
    return m;
}

bool is_unitary_generator(const SuperOp& l, const std::vector<Mat>& basis, double tol) {
    double imag = 0.0;
    const RMat m = real_basis_matrix(l, basis, &imag);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return imag <= tol * scale && (m + m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Mat sector_block(const LindbladSpec& spec, const std::vector<Eigen::Index>& rows,
                 const std::vector<Eigen::Index>& cols) {
    const Eigen::Index d = spec.dim();
    const auto nr = static_cast<Eigen::Index>(rows.size());
    const auto nc = static_cast<Eigen::Index>(cols.size());
    Mat block(nr * nc, nr * nc);
    for (Eigen::Index bi = 0; bi < nr; ++bi) {
        for (Eigen::Index bj = 0; bj < nc; ++bj) {
            Mat e = Mat::Zero(d, d);
            e(rows[static_cast<size_t>(bi)], cols[static_cast<size_t>(bj)]) = 1.0;
            const Mat le = apply_lindblad(spec, e);
            for (Eigen::Index ai = 0; ai < nr; ++ai)
                for (Eigen::Index aj = 0; aj < nc; ++aj)
                    block(ai * nc + aj, bi * nc + bj) =
                        le(rows[static_cast<size_t>(ai)], cols[static_cast<size_t>(aj)]);
        }
    }
    return block;
}

}  // namespace lindkit
