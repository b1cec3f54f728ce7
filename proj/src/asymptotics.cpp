#include "lindkit/asymptotics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lindkit {

namespace {

// Hilbert-Schmidt Gram-Schmidt with pivoting; returns an orthonormal basis of
// the span, keeping at most `max_rank` elements (-1 for no cap).
std::vector<Mat> orthonormal_span(std::vector<Mat> cand, double drop_tol,
                                  Eigen::Index max_rank = -1) {
    std::vector<Mat> basis;
    double scale = 0.0;
    for (const auto& c : cand) scale = std::max(scale, c.norm());
    if (scale == 0.0) return basis;
    while (max_rank < 0 || static_cast<Eigen::Index>(basis.size()) < max_rank) {
        size_t best = cand.size();
        double best_norm = drop_tol * scale;
        for (size_t k = 0; k < cand.size(); ++k) {
            const double n = cand[k].norm();
            if (n > best_norm) {
                best_norm = n;
                best = k;
            }
        }
        if (best == cand.size()) break;
        Mat b = cand[best] / cand[best].norm();
        // re-orthogonalize once for stability
        for (const auto& prev : basis) b -= prev * hs_inner(prev, b);
        b /= b.norm();
        basis.push_back(b);
        for (auto& c : cand) c -= b * hs_inner(b, c);
    }
    return basis;
}

std::vector<PeripheralSector> peripheral_sectors(const SuperOp& op, const Tolerances& tol,
                                                 bool flip_delta_sign) {
    const SpectrumResult spec = spectrum(op, tol);
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(op.rows()))));
    std::vector<PeripheralSector> sectors;
    for (const auto& c : spec.clusters) {
        if (!spec.is_peripheral(c)) continue;
        if (c.defective)
            throw NumericalError("peripheral cluster is defective (Jordan block at Re = 0)");
        PeripheralSector sec;
        sec.delta = flip_delta_sign ? -c.value.imag() : c.value.imag();
        for (auto m : c.members) sec.ops.push_back(devectorize(spec.right_vectors.col(m), d));
        sectors.push_back(std::move(sec));
    }
    std::sort(sectors.begin(), sectors.end(),
              [](const PeripheralSector& a, const PeripheralSector& b) {
                  return a.delta > b.delta;
              });
    return sectors;
}

double delta_match_tol(double a, double b) {
    return 1e-6 * std::max({1.0, std::abs(a), std::abs(b)});
}

// J' coefficients such that <<J'_mu | Psi_nu>> = delta_{mu nu}.
std::vector<Mat> dual_basis(const std::vector<Mat>& lefts, const std::vector<Mat>& rights) {
    const auto n = static_cast<Eigen::Index>(rights.size());
    Mat gram(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index v = 0; v < n; ++v)
            gram(m, v) = hs_inner(lefts[static_cast<size_t>(m)], rights[static_cast<size_t>(v)]);
    Eigen::JacobiSVD<Mat> svd(gram);
    const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
    if (!std::isfinite(cond) || cond > 1e10)
        throw NumericalError("biorthogonalize: singular Gram matrix (mis-clustered eigenvalues?)");
    const Mat ginv = gram.inverse();
    std::vector<Mat> out;
    out.reserve(static_cast<size_t>(n));
    for (Eigen::Index m = 0; m < n; ++m) {
        Mat j = Mat::Zero(rights[0].rows(), rights[0].cols());
        for (Eigen::Index v = 0; v < n; ++v)
            j += std::conj(ginv(m, v)) * lefts[static_cast<size_t>(v)];
        out.push_back(std::move(j));
    }
    return out;
}

}  // namespace

std::vector<Eigen::Index> AsymptoticBasis::stationary() const {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < size(); ++k)
        if (entries[static_cast<size_t>(k)].delta == 0.0) idx.push_back(k);
    return idx;
}

SuperOp AsymptoticBasis::projector() const {
    SuperOp p = SuperOp::Zero(dim * dim, dim * dim);
    for (const auto& e : entries) p += vectorize(e.psi) * vectorize(e.j).adjoint();
    return p;
}

std::vector<PeripheralSector> steady_basis(const SuperOp& l, const Tolerances& tol) {
    return peripheral_sectors(l, tol, /*flip_delta_sign=*/false);
}

std::vector<PeripheralSector> conserved_direct(const SuperOp& l, const Tolerances& tol) {
    // L^ddag J = -i delta J: right eigenvectors of the adjoint matrix.
    return peripheral_sectors(superop_adjoint(l), tol, /*flip_delta_sign=*/true);
}

AsymptoticBasis biorthogonalize(const std::vector<PeripheralSector>& rights,
                                const std::vector<PeripheralSector>& lefts,
                                const Tolerances& tol) {
    require(!rights.empty(), "biorthogonalize: no peripheral sectors");
    const Eigen::Index d = rights.front().ops.front().rows();
    AsymptoticBasis basis;
    basis.dim = d;

    auto find_left = [&](double delta) -> const PeripheralSector* {
        for (const auto& s : lefts)
            if (std::abs(s.delta - delta) <= delta_match_tol(s.delta, delta)) return &s;
        return nullptr;
    };

    // Stationary sector: Hermitian orthonormal rights, Hermitian duals.
    for (const auto& sec : rights) {
        if (std::abs(sec.delta) > delta_match_tol(sec.delta, 0.0)) continue;
        const auto* lsec = find_left(0.0);
        if (!lsec || lsec->ops.size() != sec.ops.size())
            throw NumericalError("biorthogonalize: unmatched stationary sector");
        std::vector<Mat> herm;
        for (const auto& psi : sec.ops) {
            herm.push_back(0.5 * (psi + psi.adjoint()));
            herm.push_back(-0.5 * I_UNIT * (psi - Mat(psi.adjoint())));
        }
        auto psis = orthonormal_span(std::move(herm), 1e-7,
                                     static_cast<Eigen::Index>(sec.ops.size()));
        if (psis.size() != sec.ops.size())
            throw NumericalError("biorthogonalize: stationary sector is not Hermitian-closed");
        auto js = dual_basis(lsec->ops, psis);
        for (size_t k = 0; k < psis.size(); ++k) {
            Mat j = 0.5 * (js[k] + Mat(js[k].adjoint()));
            basis.entries.push_back({0.0, psis[k], std::move(j)});
        }
    }

    // Rotating sectors: biorthogonalize Delta > 0, mirror Delta < 0.
    std::vector<AsymptoticEntry> tail;
    for (const auto& sec : rights) {
        if (sec.delta <= delta_match_tol(sec.delta, 0.0)) continue;
        const auto* lsec = find_left(sec.delta);
        if (!lsec || lsec->ops.size() != sec.ops.size())
            throw NumericalError("biorthogonalize: unmatched rotating sector");
        auto js = dual_basis(lsec->ops, sec.ops);
        std::vector<AsymptoticEntry> plus, minus;
        for (size_t k = 0; k < sec.ops.size(); ++k) {
            plus.push_back({sec.delta, sec.ops[k], js[k]});
            minus.push_back({-sec.delta, sec.ops[k].adjoint(), js[k].adjoint()});
        }
        for (auto& e : plus) tail.push_back(std::move(e));
        for (auto& e : minus) tail.push_back(std::move(e));
    }
    for (auto& e : tail) basis.entries.push_back(std::move(e));

    // Full biorthonormality check across sectors.
    double defect = 0.0;
    for (Eigen::Index a = 0; a < basis.size(); ++a)
        for (Eigen::Index b = 0; b < basis.size(); ++b) {
            const cxd g = hs_inner(basis.entries[static_cast<size_t>(a)].j,
                                   basis.entries[static_cast<size_t>(b)].psi);
            defect = std::max(defect, std::abs(g - (a == b ? cxd(1.0) : cxd(0.0))));
        }
    if (defect > std::max(tol.biortho, 1e-6))
        throw NumericalError("biorthogonalize: Gram defect " + std::to_string(defect));
    return basis;
}

AsymptoticBasis asymptotic_basis(const SuperOp& l, const Tolerances& tol) {
    return biorthogonalize(steady_basis(l, tol), conserved_direct(l, tol), tol);
}

std::vector<Mat> conserved_analytic(const LindbladSpec& spec, const CornerSplit& split,
                                    const std::vector<Mat>& j_ul, double delta) {
    const Eigen::Index d = split.dim, r = split.rank;
    const Eigen::Index nq = d - r;
    std::vector<Mat> out;
    if (nq == 0) {
        out = j_ul;
        return out;
    }

    // Restricted operator L_lr^ddag + i delta on the lr corner, in the
    // adapted frame (columns/rows indexed by lr pairs).
    const Eigen::Index nlr = nq * nq;
    Mat t(nlr, nlr);
    const Mat u_q = split.frame.rightCols(nq);
    for (Eigen::Index i = 0; i < nq; ++i)
        for (Eigen::Index j = 0; j < nq; ++j) {
            const Mat e = u_q.col(i) * u_q.col(j).adjoint();
            const Mat le = apply_adjoint(spec, e);
            const Mat proj = u_q.adjoint() * le * u_q;
            for (Eigen::Index a = 0; a < nq; ++a)
                for (Eigen::Index b = 0; b < nq; ++b) t(a * nq + b, i * nq + j) = proj(a, b);
        }
    t += I_UNIT * delta * Mat::Identity(nlr, nlr);

    Eigen::PartialPivLU<Mat> lu(t);
    for (const auto& jul : j_ul) {
        const Mat rhs_full = apply_adjoint(spec, jul);
        const Mat rhs_ad = u_q.adjoint() * rhs_full * u_q;
        Vec rhs(nlr);
        for (Eigen::Index a = 0; a < nq; ++a)
            for (Eigen::Index b = 0; b < nq; ++b) rhs(a * nq + b) = rhs_ad(a, b);
        const Vec x = lu.solve(-rhs);
        if ((t * x + rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
            throw NumericalError(
                "conserved_analytic: singular restricted operator (spectral misclassification?)");
        Mat j_lr(nq, nq);
        for (Eigen::Index a = 0; a < nq; ++a)
            for (Eigen::Index b = 0; b < nq; ++b) j_lr(a, b) = x(a * nq + b);
        out.push_back(jul + u_q * j_lr * u_q.adjoint());
    }
    return out;
}

AsymptoticProjector asymptotic_projector(const AsymptoticBasis& basis) {
    AsymptoticProjector proj;
    proj.p_inf = basis.projector();
    proj.p_psi = proj.p_inf;  // without a split the minimal projection is not reduced
    return proj;
}

AsymptoticProjector asymptotic_projector(const AsymptoticBasis& basis, const CornerSplit& split) {
    AsymptoticProjector proj;
    proj.p_inf = basis.projector();
    proj.p_psi = SuperOp::Zero(proj.p_inf.rows(), proj.p_inf.cols());
    for (const auto& e : basis.entries) {
        const Mat j_ul = split.project(Corner::UL, e.j);
        proj.p_psi += vectorize(e.psi) * vectorize(j_ul).adjoint();
    }
    return proj;
}

Mat infinite_time_state(const AsymptoticBasis& basis, const Mat& rho_in, double t) {
    require(rho_in.rows() == basis.dim && rho_in.cols() == basis.dim,
            "infinite_time_state: dimension mismatch");
    const double scale = std::max(1.0, rho_in.norm());
    if ((rho_in - rho_in.adjoint()).norm() > 1e-8 * scale ||
        std::abs(rho_in.trace() - cxd(1.0)) > 1e-8)
        throw std::invalid_argument("infinite_time_state: rho_in is not a density matrix");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho_in);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("infinite_time_state: rho_in is not positive semidefinite");

    Mat out = Mat::Zero(basis.dim, basis.dim);
    for (const auto& e : basis.entries) {
        const cxd c = hs_inner(e.j, rho_in);
        out += c * std::exp(I_UNIT * e.delta * t) * e.psi;
    }
    return out;
}

namespace {

std::vector<double> fixed_weights(size_t n, unsigned salt) {
    // deterministic quasi-random weights for generic algebra elements
    std::vector<double> w(n);
    double x = 0.5 + 0.096153 * double(salt + 1);
    for (size_t k = 0; k < n; ++k) {
        x = std::fmod(x * 9301.0 + 49297.0, 233280.0) / 233280.0;
        w[k] = 0.25 + x;
    }
    return w;
}

struct BlockFactorization {
    bool ok = false;
    Mat w;  // product-basis isometry within the block space
    Eigen::Index d = 0, d_ax = 0;
};

BlockFactorization factor_block(const std::vector<Mat>& alg, Eigen::Index block_dim,
                                Eigen::Index d) {
    BlockFactorization out;
    out.d = d;
    out.d_ax = block_dim / d;
    if (out.d_ax * d != block_dim) return out;
    if (d == 1) {
        out.w = Mat::Identity(block_dim, block_dim);
        out.ok = true;
        return out;
    }
    for (unsigned attempt = 0; attempt < 3; ++attempt) {
        const auto wts = fixed_weights(alg.size(), attempt);
        Mat a = Mat::Zero(block_dim, block_dim);
        for (size_t k = 0; k < alg.size(); ++k) a += wts[k] * alg[k];
        a = 0.5 * (a + Mat(a.adjoint()));
        Eigen::SelfAdjointEigenSolver<Mat> es(a);
        // eigenvalues must form d groups of size d_ax
        std::vector<std::vector<Eigen::Index>> groups;
        const double cluster = 1e-6 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        for (Eigen::Index k = 0; k < block_dim; ++k) {
            if (!groups.empty() &&
                std::abs(es.eigenvalues()(k) - es.eigenvalues()(groups.back().back())) < cluster)
                groups.back().push_back(k);
            else
                groups.push_back({k});
        }
        if (static_cast<Eigen::Index>(groups.size()) != d) continue;
        bool sizes_ok = true;
        for (const auto& g : groups)
            if (static_cast<Eigen::Index>(g.size()) != out.d_ax) sizes_ok = false;
        if (!sizes_ok) continue;

        std::vector<Mat> projs;
        for (const auto& g : groups) {
            Mat p = Mat::Zero(block_dim, block_dim);
            for (auto k : g) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            projs.push_back(p);
        }
        Mat v0(block_dim, out.d_ax);
        for (Eigen::Index k = 0; k < out.d_ax; ++k) v0.col(k) = es.eigenvectors().col(groups[0][static_cast<size_t>(k)]);

        const auto wr = fixed_weights(alg.size(), attempt + 7);
        const auto wi = fixed_weights(alg.size(), attempt + 13);
        Mat b = Mat::Zero(block_dim, block_dim);
        for (size_t k = 0; k < alg.size(); ++k) b += (wr[k] + I_UNIT * wi[k]) * alg[k];

        Mat w(block_dim, block_dim);
        w.leftCols(out.d_ax) = v0;
        bool good = true;
        for (Eigen::Index k = 1; k < d; ++k) {
            const Mat x = projs[static_cast<size_t>(k)] * b * projs[0];
            const double c = std::real((x.adjoint() * x).trace()) / double(out.d_ax);
            if (!(c > 1e-12)) {
                good = false;
                break;
            }
            w.middleCols(k * out.d_ax, out.d_ax) = (x / std::sqrt(c)) * v0;
        }
        if (!good) continue;
        if ((w.adjoint() * w - Mat::Identity(block_dim, block_dim)).norm() > 1e-6) continue;
        out.w = w;
        out.ok = true;
        return out;
    }
    return out;
}

}  // namespace

AshStructure classify_structure(const AsymptoticBasis& basis, const CornerSplit& split,
                                const Tolerances& tol) {
    AshStructure st;
    const auto stat = basis.stationary();
    st.rotating_sectors_present = stat.size() != basis.entries.size();
    if (stat.empty()) return st;

    const Eigen::Index r = split.rank;
    const Mat u_p = split.frame.leftCols(r);

    // Compressed span of the J_ul's: the relevant operator algebra on range(P).
    std::vector<Mat> j_small;
    for (auto idx : stat)
        j_small.push_back(u_p.adjoint() * basis.entries[static_cast<size_t>(idx)].j * u_p);
    const auto alg = orthonormal_span(j_small, 1e-7);
    const auto n_alg = static_cast<Eigen::Index>(alg.size());
    if (n_alg != static_cast<Eigen::Index>(stat.size())) return st;  // degenerate span

    // Center of the algebra: coefficient null space of the commutator map.
    Mat comm_map(n_alg * r * r, n_alg);
    for (Eigen::Index m = 0; m < n_alg; ++m)
        for (Eigen::Index v = 0; v < n_alg; ++v) {
            const Mat c = alg[static_cast<size_t>(m)] * alg[static_cast<size_t>(v)] -
                          alg[static_cast<size_t>(v)] * alg[static_cast<size_t>(m)];
            comm_map.block(v * r * r, m, r * r, 1) = vectorize(c);
        }
    Eigen::JacobiSVD<Mat> svd(comm_map, Eigen::ComputeThinV);
    std::vector<Mat> center;
    const double sv_cut = 1e-8 * std::max(1.0, svd.singularValues()(0));
    for (Eigen::Index k = 0; k < svd.matrixV().cols(); ++k) {
        if (k < svd.singularValues().size() && svd.singularValues()(k) > sv_cut) continue;
        Mat z = Mat::Zero(r, r);
        for (Eigen::Index m = 0; m < n_alg; ++m) z += svd.matrixV()(m, k) * alg[static_cast<size_t>(m)];
        center.push_back(0.5 * (z + Mat(z.adjoint())));
    }
    center = orthonormal_span(center, 1e-7);
    if (center.empty()) return st;

    // Minimal central projections from a generic central element.
    const auto wts = fixed_weights(center.size(), 0);
    Mat z = Mat::Zero(r, r);
    for (size_t k = 0; k < center.size(); ++k) z += wts[k] * center[k];
    Eigen::SelfAdjointEigenSolver<Mat> zes(z);
    std::vector<std::vector<Eigen::Index>> groups;
    const double zc = 1e-6 * std::max(1.0, zes.eigenvalues().cwiseAbs().maxCoeff());
    for (Eigen::Index k = 0; k < r; ++k) {
        if (!groups.empty() &&
            std::abs(zes.eigenvalues()(k) - zes.eigenvalues()(groups.back().back())) < zc)
            groups.back().push_back(k);
        else
            groups.push_back({k});
    }
    if (groups.size() != center.size()) return st;  // inconsistent center rank

    double worst = 0.0;
    for (const auto& g : groups) {
        const auto bd = static_cast<Eigen::Index>(g.size());
        Mat v(r, bd);
        for (Eigen::Index k = 0; k < bd; ++k) v.col(k) = zes.eigenvectors().col(g[static_cast<size_t>(k)]);

        std::vector<Mat> blk_alg;
        for (const auto& a : alg) blk_alg.push_back(v.adjoint() * a * v);
        const auto blk_basis = orthonormal_span(blk_alg, 1e-7);
        const auto d2 = static_cast<Eigen::Index>(blk_basis.size());
        const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(d2))));
        if (d * d != d2) return st;

        auto fact = factor_block(blk_basis, bd, d);
        if (!fact.ok) return st;

        NsBlock blk;
        blk.dfs_dim = d;
        blk.aux_dim = fact.d_ax;
        const Mat g_iso = u_p * v;  // full-space isometry into the block
        blk.block_projector = g_iso * g_iso.adjoint();
        blk.factor_frame = fact.w;
        blk.p_ax = Mat::Identity(fact.d_ax, fact.d_ax);

        // Block steady state from the trace footprint of the block projector.
        Mat rho_blk = Mat::Zero(basis.dim, basis.dim);
        for (auto idx : stat) {
            const auto& e = basis.entries[static_cast<size_t>(idx)];
            rho_blk += hs_inner(e.j, blk.block_projector) * e.psi;
        }
        Mat t_rho = fact.w.adjoint() * (g_iso.adjoint() * rho_blk * g_iso) * fact.w;
        Mat rho_ax = Mat::Zero(fact.d_ax, fact.d_ax);
        for (Eigen::Index k = 0; k < d; ++k)
            rho_ax += t_rho.block(k * fact.d_ax, k * fact.d_ax, fact.d_ax, fact.d_ax);
        rho_ax /= rho_ax.trace();
        blk.rho_ax = 0.5 * (rho_ax + Mat(rho_ax.adjoint()));
        blk.n_ax = std::sqrt(std::abs((blk.rho_ax * blk.rho_ax).trace().real()));

        // Extract the DFS factor of every stationary entry and measure how
        // well Psi = psi_dfs (x) rho_ax / n_ax reproduces it.
        double blk_worst = 0.0;
        for (auto idx : stat) {
            const auto& e = basis.entries[static_cast<size_t>(idx)];
            const Mat t_psi =
                fact.w.adjoint() * (g_iso.adjoint() * e.psi * g_iso) * fact.w;
            Mat psi_dfs = Mat::Zero(d, d);
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index b = 0; b < d; ++b)
                    psi_dfs(a, b) = blk.n_ax * t_psi.block(a * fact.d_ax, b * fact.d_ax,
                                                           fact.d_ax, fact.d_ax)
                                                   .trace();
            if (psi_dfs.norm() < 1e-9) continue;  // entry lives in another block
            Mat recon = Mat::Zero(bd, bd);
            for (Eigen::Index a = 0; a < d; ++a)
                for (Eigen::Index b = 0; b < d; ++b)
                    recon.block(a * fact.d_ax, b * fact.d_ax, fact.d_ax, fact.d_ax) =
                        psi_dfs(a, b) / blk.n_ax * blk.rho_ax;
            blk_worst = std::max(blk_worst, (t_psi - recon).norm());
            blk.psi_dfs.push_back(std::move(psi_dfs));
            blk.entry_indices.push_back(idx);
        }
        blk.residual = blk_worst;
        worst = std::max(worst, blk_worst);
        st.blocks.push_back(std::move(blk));
    }

    st.residual = worst;
    if (worst > 1e-6) {
        st.kind = st.blocks.size() > 1 ? AshKind::MultiBlock : AshKind::Unclassified;
        return st;
    }
    if (stat.size() == 1)
        st.kind = AshKind::Unique;
    else if (st.blocks.size() == 1)
        st.kind = st.blocks[0].aux_dim == 1 ? AshKind::DFS : AshKind::NS;
    else {
        bool all_classical = true;
        for (const auto& b : st.blocks)
            if (b.dfs_dim != 1) all_classical = false;
        st.kind = all_classical ? AshKind::ClassicalSimplex : AshKind::MultiBlock;
    }
    return st;
}

LindbladSpec channel_embedding(const std::vector<Mat>& kraus, const CornerSplit& split,
                               double rate, double tol) {
    require(!kraus.empty(), "channel_embedding: empty Kraus list");
    Mat sum = Mat::Zero(split.dim, split.dim);
    std::vector<Jump> jumps;
    for (const auto& k : kraus) {
        const Mat f = split.p * k * split.q;  // enforce the lr -> ul shape
        if ((f - k).norm() > tol * std::max(1.0, k.norm()))
            throw std::invalid_argument("channel_embedding: Kraus operator is not ul<-lr shaped");
        sum += f.adjoint() * f;
        jumps.push_back({f, rate});
    }
    if ((sum - split.q).norm() > tol * std::max(1.0, split.q.norm()))
        throw std::invalid_argument("channel_embedding: completeness sum F^dag F != Q");
    return make_spec(Mat::Zero(split.dim, split.dim), std::move(jumps));
}

NoetherReport noether_checks(const LindbladSpec& spec, const Mat& j, double probe_angle) {
    require(j.rows() == spec.dim() && j.cols() == spec.dim(), "noether_checks: dimension mismatch");
    NoetherReport rep;
    const double jn = std::max(1.0, j.norm());
    rep.conserved_residual = apply_adjoint(spec, j).norm() / jn;

    auto comm = [](const Mat& a, const Mat& b) { return Mat(a * b - b * a); };
    rep.commutant_residual = comm(j, spec.hamiltonian).norm() / jn;
    for (const auto& jump : spec.jumps)
        rep.commutant_residual = std::max(rep.commutant_residual, comm(j, jump.op).norm() / jn);

    const Mat u = Mat(I_UNIT * probe_angle * j).exp();
    LindbladSpec rotated = spec;
    rotated.hamiltonian = u.adjoint() * spec.hamiltonian * u;
    for (auto& jump : rotated.jumps) jump.op = u.adjoint() * jump.op * u;
    const SuperOp l = build_superop(spec);
    rep.symmetry_residual = (build_superop(rotated) - l).norm() / std::max(1.0, l.norm());

    rep.is_projector = (j * j - j).norm() < 1e-8 * jn;
    return rep;
}

}  // namespace lindkit
