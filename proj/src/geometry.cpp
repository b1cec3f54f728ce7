#include "lindkit/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace lindkit {

namespace {

// Project a reference basis through the instantaneous asymptotic projection
// and re-biorthogonalize (J side only).  The gauge freedom of the underlying
// eigensolve cancels because Pinf is basis-independent.
std::vector<AsymptoticEntry> transported_basis(const SuperOp& p_inf,
                                               const std::vector<AsymptoticEntry>& ref,
                                               double cond_limit = 1e8) {
    const auto n = static_cast<Eigen::Index>(ref.size());
    const Eigen::Index d = ref.front().psi.rows();
    std::vector<AsymptoticEntry> out(ref.size());
    std::vector<Vec> psis(ref.size()), js(ref.size());
    for (size_t k = 0; k < ref.size(); ++k) {
        psis[k] = p_inf * vectorize(ref[k].psi);
        js[k] = p_inf.adjoint() * vectorize(ref[k].j);
    }
    Mat gram(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            gram(a, b) = js[static_cast<size_t>(a)].dot(psis[static_cast<size_t>(b)]);
    Eigen::JacobiSVD<Mat> svd(gram);
    const double cond =
        svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!std::isfinite(cond) || cond > cond_limit)
        throw NumericalError("transported_basis: overlap matrix is near-singular");
    const Mat ginv = gram.inverse();
    for (Eigen::Index mu = 0; mu < n; ++mu) {
        Vec j = Vec::Zero(d * d);
        for (Eigen::Index nu = 0; nu < n; ++nu)
            j += std::conj(ginv(mu, nu)) * js[static_cast<size_t>(nu)];
        out[static_cast<size_t>(mu)] = {ref[static_cast<size_t>(mu)].delta,
                                        devectorize(psis[static_cast<size_t>(mu)], d),
                                        devectorize(j, d)};
    }
    return out;
}

SuperOp p_inf_at(const LindbladFamily& family, const RVec& x) {
    return asymptotic_basis(build_superop(family.spec_at(x)), family.tol).projector();
}

double step_for(const LindbladFamily& family, const RVec& x, double h) {
    if (h > 0) return h;
    return family.rel_step * std::max(1.0, x.norm());
}

Mat gram_between(const std::vector<AsymptoticEntry>& next,
                 const std::vector<AsymptoticEntry>& prev) {
    const auto n = static_cast<Eigen::Index>(prev.size());
    Mat b(n, n);
    for (Eigen::Index mu = 0; mu < n; ++mu)
        for (Eigen::Index nu = 0; nu < n; ++nu)
            b(mu, nu) = hs_inner(next[static_cast<size_t>(mu)].j,
                                 prev[static_cast<size_t>(nu)].psi);
    return b;
}

}  // namespace

void PathSpec::validate() const {
    require(points.size() >= 2, "PathSpec: need at least two points");
    if (closed)
        require((points.front() - points.back()).norm() < 1e-12,
                "PathSpec: closed path must end where it starts");
}

RVec PathSpec::at(double s) const {
    validate();
    const auto n = static_cast<Eigen::Index>(points.size()) - 1;
    const double u = std::clamp(s, 0.0, 1.0) * double(n);
    const auto seg = std::min<Eigen::Index>(static_cast<Eigen::Index>(u), n - 1);
    const double frac = u - double(seg);
    return points[static_cast<size_t>(seg)] * (1.0 - frac) +
           points[static_cast<size_t>(seg) + 1] * frac;
}

PathSpec PathSpec::refined(int factor) const {
    validate();
    PathSpec fine;
    fine.closed = closed;
    const auto n_seg = (points.size() - 1) * static_cast<size_t>(factor);
    for (size_t k = 0; k <= n_seg; ++k) fine.points.push_back(at(double(k) / double(n_seg)));
    return fine;
}

std::vector<AsymptoticEntry> instantaneous_basis(const LindbladFamily& family, const RVec& x) {
    if (family.basis_at) return family.basis_at(x);
    return asymptotic_basis(build_superop(family.spec_at(x)), family.tol).entries;
}

Mat basis_support(const std::vector<AsymptoticEntry>& entries, double rank_tol) {
    const Eigen::Index d = entries.front().psi.rows();
    Mat m = Mat::Zero(d, d);
    for (const auto& e : entries) m += e.psi * e.psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    const double cut = rank_tol * std::max(es.eigenvalues().maxCoeff(), 1e-300);
    Mat p = Mat::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k)
        if (es.eigenvalues()(k) > cut)
            p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    return p;
}

SuperOp minimal_projection(const std::vector<AsymptoticEntry>& entries) {
    const Eigen::Index d = entries.front().psi.rows();
    const Mat p = basis_support(entries);
    SuperOp out = SuperOp::Zero(d * d, d * d);
    for (const auto& e : entries)
        out += vectorize(e.psi) * vectorize(Mat(p * e.j * p)).adjoint();
    return out;
}

std::vector<std::vector<AsymptoticEntry>> smooth_basis_along_path(const LindbladFamily& family,
                                                                  const PathSpec& path) {
    path.validate();
    std::vector<std::vector<AsymptoticEntry>> out;
    out.push_back(instantaneous_basis(family, path.points.front()));
    const size_t count = out.front().size();
    for (size_t k = 1; k < path.points.size(); ++k) {
        if (family.basis_at) {
            auto b = family.basis_at(path.points[k]);
            require(b.size() == count, "smooth_basis_along_path: basis dimension changed");
            out.push_back(std::move(b));
            continue;
        }
        const auto inst = asymptotic_basis(build_superop(family.spec_at(path.points[k])),
                                           family.tol);
        if (inst.entries.size() != count)
            throw NumericalError("smooth_basis_along_path: peripheral count changed (gap closure)");
        out.push_back(transported_basis(inst.projector(), out.back()));
    }
    return out;
}

RMat adiabatic_connection(const BasisField& field, const RVec& x, int alpha, double h,
                          bool richardson) {
    require(static_cast<bool>(field), "adiabatic_connection: needs a basis field (gauge)");
    auto stencil = [&](double step) {
        RVec xp = x, xm = x;
        xp(alpha) += step;
        xm(alpha) -= step;
        const auto bp = field(xp), bm = field(xm), b0 = field(x);
        const auto n = static_cast<Eigen::Index>(b0.size());
        RMat a(n, n);
        for (Eigen::Index mu = 0; mu < n; ++mu)
            for (Eigen::Index nu = 0; nu < n; ++nu) {
                const Mat dpsi = (bp[static_cast<size_t>(nu)].psi -
                                  bm[static_cast<size_t>(nu)].psi) /
                                 (2.0 * step);
                a(mu, nu) = hs_inner(b0[static_cast<size_t>(mu)].j, dpsi).real();
            }
        return a;
    };
    if (!richardson) return stencil(h);
    const RMat coarse = stencil(h), fine = stencil(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;  // O(h^4)
}

RMat curvature(const BasisField& field, const RVec& x, int a, int b, double h) {
    auto conn = [&](const RVec& y, int dir) { return adiabatic_connection(field, y, dir, h, true); };
    RVec xpa = x, xma = x, xpb = x, xmb = x;
    xpa(a) += h;
    xma(a) -= h;
    xpb(b) += h;
    xmb(b) -= h;
    const RMat da_b = (conn(xpa, b) - conn(xma, b)) / (2.0 * h);
    const RMat db_a = (conn(xpb, a) - conn(xmb, a)) / (2.0 * h);
    const RMat aa = conn(x, a), ab = conn(x, b);
    return da_b - db_a + aa * ab - ab * aa;
}

HolonomyResult holonomy(const LindbladFamily& family, const PathSpec& path, double conv_tol,
                        int max_refine) {
    path.validate();
    HolonomyResult res;
    Mat prev_b;
    int factor = 1;
    for (int attempt = 0; attempt < max_refine; ++attempt, factor *= 2) {
        const PathSpec fine = path.refined(factor);
        auto bases = smooth_basis_along_path(family, fine);
        if (path.closed) bases.back() = bases.front();  // pin the endpoint gauge

        const auto n = static_cast<Eigen::Index>(bases.front().size());
        Mat b = Mat::Identity(n, n);
        for (size_t k = 0; k + 1 < bases.size(); ++k) b = gram_between(bases[k + 1], bases[k]) * b;

        // projector-product (operator) form, evaluated on the same endpoints
        const Eigen::Index d2 = bases.front().front().psi.rows() *
                                bases.front().front().psi.rows();
        SuperOp u = SuperOp::Identity(d2, d2);
        for (size_t k = 0; k + 1 < bases.size(); ++k) u = minimal_projection(bases[k + 1]) * u;
        Mat u_coeff(n, n);
        for (Eigen::Index mu = 0; mu < n; ++mu)
            for (Eigen::Index nu = 0; nu < n; ++nu)
                u_coeff(mu, nu) =
                    vectorize(bases.back()[static_cast<size_t>(mu)].j)
                        .dot(u * vectorize(bases.front()[static_cast<size_t>(nu)].psi));

        res.b_coeff = b;
        res.u_coeff = u_coeff;
        res.segments = static_cast<int>(fine.points.size()) - 1;
        if (prev_b.size() > 0) {
            res.step_change = (b - prev_b).norm();
            if (res.step_change < conv_tol) {
                res.converged = true;
                return res;
            }
        }
        prev_b = b;
    }
    return res;  // converged stays false; caller decides
}

Mat qgt(const LindbladFamily& family, const RVec& x, int a, int b, double h) {
    const double step = step_for(family, x, h);
    auto p_psi_at = [&](const RVec& y) {
        if (family.basis_at) return minimal_projection(family.basis_at(y));
        return minimal_projection(
            asymptotic_basis(build_superop(family.spec_at(y)), family.tol).entries);
    };
    RVec xpa = x, xma = x, xpb = x, xmb = x;
    xpa(a) += step;
    xma(a) -= step;
    xpb(b) += step;
    xmb(b) -= step;
    const SuperOp dpa = (p_psi_at(xpa) - p_psi_at(xma)) / (2.0 * step);
    const SuperOp dpb = (p_psi_at(xpb) - p_psi_at(xmb)) / (2.0 * step);

    const auto basis = instantaneous_basis(family, x);
    const Mat p = basis_support(basis);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Mat q(n, n);
    for (Eigen::Index mu = 0; mu < n; ++mu) {
        const Vec jul = vectorize(Mat(p * basis[static_cast<size_t>(mu)].j * p));
        for (Eigen::Index nu = 0; nu < n; ++nu)
            q(mu, nu) = jul.dot(dpa * dpb * vectorize(basis[static_cast<size_t>(nu)].psi));
    }
    return q;
}

MetricResult metrics(const LindbladFamily& family, const RVec& x, double h,
                     Eigen::Index aux_dim) {
    const double step = step_for(family, x, h);
    MetricResult res;
    const int np = family.param_dim;
    res.m = RMat::Zero(np, np);
    res.m_alt = RMat::Zero(np, np);

    std::vector<SuperOp> dp(static_cast<size_t>(np));
    auto p_psi_at = [&](const RVec& y) {
        if (family.basis_at) return minimal_projection(family.basis_at(y));
        return minimal_projection(
            asymptotic_basis(build_superop(family.spec_at(y)), family.tol).entries);
    };
    for (int a = 0; a < np; ++a) {
        RVec xp = x, xm = x;
        xp(a) += step;
        xm(a) -= step;
        dp[static_cast<size_t>(a)] = (p_psi_at(xp) - p_psi_at(xm)) / (2.0 * step);
    }
    const SuperOp p_psi = p_psi_at(x);

    RMat q_tr(np, np), t_tr(np, np);
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) {
            q_tr(a, b) = qgt(family, x, a, b, step).trace().real();
            t_tr(a, b) = (p_psi.adjoint() * dp[static_cast<size_t>(a)].adjoint() *
                          dp[static_cast<size_t>(b)] * p_psi)
                             .trace()
                             .real();
        }
    // both-orders symmetrization: M_ab = sum_mu (Q_ab + Q_ba)_{mu mu}
    res.m = q_tr + q_tr.transpose();
    res.m_alt = (t_tr + t_tr.transpose()) / double(aux_dim);
    return res;
}

double path_length(const LindbladFamily& family, const PathSpec& path, Eigen::Index aux_dim,
                   double h) {
    path.validate();
    double total = 0.0;
    const auto n_seg = path.points.size() - 1;
    for (size_t k = 0; k < n_seg; ++k) {
        const RVec mid = 0.5 * (path.points[k] + path.points[k + 1]);
        const RVec dx = path.points[k + 1] - path.points[k];
        const MetricResult met = metrics(family, mid, h, aux_dim);
        double quad = 0.0;
        for (int a = 0; a < family.param_dim; ++a)
            for (int b = 0; b < family.param_dim; ++b)
                quad += met.m_alt(a, b) * dx(a) * dx(b);
        total += std::sqrt(std::max(0.0, 0.5 * double(aux_dim) * quad));
    }
    return total;
}

NonadiabaticResult nonadiabatic_corrections(const LindbladFamily& family, const PathSpec& path,
                                            double total_time, const Mat& rho0) {
    path.validate();
    const auto bases = smooth_basis_along_path(family, path);
    const size_t n_pts = bases.size();
    const double ds = 1.0 / double(n_pts - 1);
    const Eigen::Index d = rho0.rows();

    std::vector<SuperOp> p_psi(n_pts), p_inf(n_pts);
    std::vector<CornerSplit> splits(n_pts);
    for (size_t k = 0; k < n_pts; ++k) {
        p_psi[k] = minimal_projection(bases[k]);
        SuperOp pi = SuperOp::Zero(d * d, d * d);
        for (const auto& e : bases[k]) pi += vectorize(e.psi) * vectorize(e.j).adjoint();
        p_inf[k] = pi;
        splits[k] = make_corner_split(basis_support(bases[k]));
    }
    auto deriv = [&](const std::vector<SuperOp>& field, size_t k) {
        if (k == 0) return SuperOp((field[1] - field[0]) / ds);
        if (k + 1 == n_pts) return SuperOp((field[k] - field[k - 1]) / ds);
        return SuperOp((field[k + 1] - field[k - 1]) / (2.0 * ds));
    };

    // transports U^(k,0) accumulated over the projector products
    std::vector<Vec> transported(n_pts);
    transported[0] = vectorize(rho0);
    for (size_t k = 1; k < n_pts; ++k) transported[k] = p_psi[k] * transported[k - 1];

    NonadiabaticResult res;
    auto thu_inv_apply = [&](size_t k, const Vec& v) {
        const SuperOp l = build_superop(family.spec_at(path.points[k]));
        AsymptoticProjector proj;
        proj.p_inf = p_inf[k];
        proj.p_psi = p_psi[k];
        return Vec(thu_drazin_inverse(l, splits[k], proj) * v);
    };

    res.leakage = thu_inv_apply(n_pts - 1, deriv(p_psi, n_pts - 1) * transported[n_pts - 1]) /
                  total_time;

    Vec tunneling = Vec::Zero(d * d);
    for (size_t k = 0; k < n_pts; ++k) {
        Vec term = thu_inv_apply(k, deriv(p_psi, k) * transported[k]);
        term = deriv(p_inf, k) * term;
        // transport the contribution to the end of the path
        for (size_t m = k + 1; m < n_pts; ++m) term = p_psi[m] * term;
        const double weight = (k == 0 || k + 1 == n_pts) ? 0.5 : 1.0;  // trapezoid
        tunneling += weight * ds * term;
    }
    res.tunneling = tunneling / total_time;
    res.leakage_norm = res.leakage.norm();
    res.tunneling_norm = res.tunneling.norm();
    return res;
}

Mat evolve_along_path(const LindbladFamily& family, const PathSpec& path, double total_time,
                      const Mat& rho0, int steps) {
    path.validate();
    require(steps >= 1, "evolve_along_path: steps must be positive");
    const double dt = total_time / steps;
    Vec v = vectorize(rho0);
    SuperOp l_cached;
    double s_cached = -1.0;
    auto l_at = [&](double s) -> const SuperOp& {
        if (s != s_cached) {
            l_cached = build_superop(family.spec_at(path.at(s)));
            s_cached = s;
        }
        return l_cached;
    };
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        const Vec k1 = l_at(t / total_time) * v;
        const Vec k2 = l_at((t + 0.5 * dt) / total_time) * (v + 0.5 * dt * k1);
        const Vec k3 = l_at((t + 0.5 * dt) / total_time) * (v + 0.5 * dt * k2);
        const Vec k4 = l_at((t + dt) / total_time) * (v + dt * k3);
        v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return devectorize(v, rho0.rows());
}

}  // namespace lindkit
