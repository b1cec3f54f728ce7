#include "lindkit/corners.hpp"

#include "lindkit/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace lindkit {

bool CornerSplit::in_corner(Corner c, Eigen::Index i, Eigen::Index j) const {
    const bool ip = i < rank, jp = j < rank;
    switch (c) {
        case Corner::UL: return ip && jp;
        case Corner::UR: return ip && !jp;
        case Corner::LL: return !ip && jp;
        case Corner::LR: return !ip && !jp;
    }
    return false;
}

std::vector<Eigen::Index> CornerSplit::corner_pairs(Corner c) const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            if (in_corner(c, i, j)) out.push_back(vec_index(i, j, dim));
    return out;
}

SuperOp CornerSplit::r_thu() const {
    return SuperOp::Identity(dim * dim, dim * dim) - r_lr();
}

Mat CornerSplit::project(Corner c, const Mat& a) const {
    switch (c) {
        case Corner::UL: return p * a * p;
        case Corner::UR: return p * a * q;
        case Corner::LL: return q * a * p;
        case Corner::LR: return q * a * q;
    }
    return a;
}

CornerSplit make_corner_split(const Mat& p, double tol) {
    require(p.rows() == p.cols(), "make_corner_split: P must be square");
    const Eigen::Index d = p.rows();
    const double scale = std::max(1.0, p.norm());
    if ((p - p.adjoint()).norm() > tol * scale || (p * p - p).norm() > tol * scale)
        throw std::invalid_argument("make_corner_split: P is not an orthogonal projector");

    Eigen::SelfAdjointEigenSolver<Mat> es(p);
    CornerSplit split;
    split.dim = d;
    split.p = p;
    split.q = Mat::Identity(d, d) - p;
    // eigenvalues ascend; reorder so the P-eigenvectors come first
    Mat frame(d, d);
    Eigen::Index col = 0;
    for (Eigen::Index k = d - 1; k >= 0; --k)
        if (es.eigenvalues()(k) > 0.5) frame.col(col++) = es.eigenvectors().col(k);
    split.rank = col;
    for (Eigen::Index k = 0; k < d; ++k)
        if (es.eigenvalues()(k) <= 0.5) frame.col(col++) = es.eigenvectors().col(k);
    split.frame = frame;
    return split;
}

CornerSplit find_nondecay_projector(const SuperOp& l, const Tolerances& tol,
                                    SupportReport* report) {
    const auto d2 = l.rows();
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
    const SuperOp p_inf = asymptotic_basis(l, tol).projector();
    Mat m = devectorize(p_inf * vectorize(Mat::Identity(d, d)), d);
    m = 0.5 * (m + Mat(m.adjoint()));  // Pinf(I) is positive semidefinite

    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    const double emax = es.eigenvalues().maxCoeff();
    const double cut = tol.rank * emax;
    Mat p = Mat::Zero(d, d);
    SupportReport rep;
    for (Eigen::Index k = 0; k < d; ++k) {
        const double e = es.eigenvalues()(k);
        if (e > cut) {
            p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            rep.smallest_kept = rep.smallest_kept == 0.0 ? e : std::min(rep.smallest_kept, e);
        } else {
            rep.largest_dropped = std::max(rep.largest_dropped, std::abs(e));
        }
    }
    if (report) *report = rep;
    return make_corner_split(p, 1e-8);
}

BlockPartition partition(const SuperOp& l, const CornerSplit& split) {
    require(l.rows() == split.dim * split.dim, "partition: split/L dimension mismatch");
    BlockPartition part;
    const SuperOp projs[3] = {split.r_ul(), split.r_of(), split.r_lr()};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) part.blocks[r][c] = projs[r] * l * projs[c];
    part.l_ul = part.blocks[0][0];
    part.l_of = part.blocks[1][1];
    part.l_lr = part.blocks[2][2];
    part.transfer = part.blocks[0][2];
    part.lower_residual = std::max({part.blocks[1][0].norm(), part.blocks[2][0].norm(),
                                    part.blocks[2][1].norm()});
    return part;
}

double DecayReport::max_residual() const {
    double m = h_ur_residual;
    for (double f : f_ll_norms) m = std::max(m, f);
    return m;
}

DecayReport verify_decay_conditions(const LindbladSpec& spec, const CornerSplit& split) {
    DecayReport rep;
    Mat h_ur_expected = Mat::Zero(split.dim, split.dim);
    for (const auto& j : spec.jumps) {
        rep.f_ll_norms.push_back(split.project(Corner::LL, j.op).norm());
        h_ur_expected -= 0.5 * I_UNIT * j.rate * split.project(Corner::UL, j.op).adjoint() *
                         split.project(Corner::UR, j.op);
    }
    rep.h_ur_residual = (split.project(Corner::UR, spec.hamiltonian) - h_ur_expected).norm();
    return rep;
}

double effective_dissipative_gap(const LindbladSpec& spec, const CornerSplit& split,
                                 const Tolerances& tol) {
    const Eigen::Index d = split.dim, r = split.rank;
    require(r >= 1, "effective_dissipative_gap: empty non-decaying subspace");

    // Sub-matrix of L on the adapted pairs (i, j) with i in range(P): the
    // ul+ur rows. Invariance up to triangular structure makes its spectrum
    // the union of the ul and ur block spectra.
    const Eigen::Index nb = r * d;
    Mat block(nb, nb);
    const Mat u_p = split.frame.leftCols(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const Mat e = split.frame.col(i) * split.frame.col(j).adjoint();
            const Mat le = apply_lindblad(spec, e);
            const Mat proj = u_p.adjoint() * le * split.frame;  // r x d
            for (Eigen::Index a = 0; a < r; ++a)
                for (Eigen::Index b = 0; b < d; ++b) block(a * d + b, i * d + j) = proj(a, b);
        }
    }
    Eigen::ComplexEigenSolver<Mat> es(block, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NumericalError("effective_dissipative_gap: eigensolver failed");
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    const double cut = tol.zero_scale * std::max(scale, 1e-300);
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double re = std::abs(es.eigenvalues()(k).real());
        if (re > cut) gap = std::min(gap, re);
    }
    if (!std::isfinite(gap))
        throw NumericalError("effective_dissipative_gap: empty nonzero spectrum");
    return gap;
}

Mat decoherence_hamiltonian(const LindbladSpec& spec) {
    Mat h = Mat::Zero(spec.dim(), spec.dim());
    for (const auto& j : spec.jumps) h += 0.5 * j.rate * j.op.adjoint() * j.op;
    return h;
}

bool is_kappa_robust(const LindbladSpec& spec, const CornerSplit& split,
                     const Tolerances& tol) {
    LindbladSpec scaled = spec;
    const double factors[] = {0.37, 2.81, 5.09, 0.64, 1.73};
    for (size_t k = 0; k < scaled.jumps.size(); ++k)
        scaled.jumps[k].rate *= factors[k % 5];
    const CornerSplit other = find_nondecay_projector(build_superop(scaled), tol);
    return (other.p - split.p).norm() < 1e-6 * std::max(1.0, split.p.norm());
}

}  // namespace lindkit
