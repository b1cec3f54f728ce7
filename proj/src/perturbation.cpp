#include "lindkit/perturbation.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace lindkit {

PerturbationSpec PerturbationSpec::hamiltonian(const Mat& v) {
    require((v - v.adjoint()).norm() <= 1e-10 * std::max(1.0, v.norm()),
            "PerturbationSpec: V must be Hermitian");
    PerturbationSpec p;
    p.kind = Kind::Hamiltonian;
    p.v = v;
    return p;
}

PerturbationSpec PerturbationSpec::jump_shift(size_t jump_index, const Mat& f) {
    PerturbationSpec p;
    p.kind = Kind::JumpShift;
    p.jump_index = jump_index;
    p.f = f;
    return p;
}

PerturbationSpec PerturbationSpec::raw_superop(const SuperOp& o, bool trace_preserving) {
    PerturbationSpec p;
    p.kind = Kind::Raw;
    p.raw = o;
    p.trace_preserving = trace_preserving;
    if (trace_preserving) {
        const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(o.rows()))));
        const Vec idv = vectorize(Mat::Identity(d, d));
        if ((o.adjoint() * idv).norm() > 1e-8 * std::max(1.0, o.norm()))
            throw std::invalid_argument("PerturbationSpec: raw superoperator is not trace-annihilating");
    }
    return p;
}

SuperOp PerturbationSpec::to_superop(const LindbladSpec& base) const {
    const Eigen::Index d = base.dim();
    const Mat id = Mat::Identity(d, d);
    switch (kind) {
        case Kind::Hamiltonian:
            return hamiltonian_superop(v);
        case Kind::JumpShift: {
            require(jump_index < base.jumps.size(), "PerturbationSpec: bad jump index");
            const Mat& f0 = base.jumps[jump_index].op;
            const double kappa = base.jumps[jump_index].rate;
            const Mat anti = f.adjoint() * f0 + f0.adjoint() * f;
            return kappa * (sandwich(f0, f.adjoint()) + sandwich(f, f0.adjoint()) -
                            0.5 * (sandwich(anti, id) + sandwich(id, anti)));
        }
        case Kind::Raw:
            return raw;
    }
    throw std::logic_error("unreachable");
}

Mat PerturbationSpec::apply(const LindbladSpec& base, const Mat& rho) const {
    switch (kind) {
        case Kind::Hamiltonian:
            return -I_UNIT * (v * rho - rho * v);
        case Kind::JumpShift: {
            const Mat& f0 = base.jumps[jump_index].op;
            const double kappa = base.jumps[jump_index].rate;
            const Mat anti = f.adjoint() * f0 + f0.adjoint() * f;
            return kappa * (f0 * rho * f.adjoint() + f * rho * f0.adjoint() -
                            0.5 * (anti * rho + rho * anti));
        }
        case Kind::Raw:
            return devectorize(raw * vectorize(rho), rho.rows());
    }
    throw std::logic_error("unreachable");
}

SuperOp drazin_inverse(const SuperOp& l, const AsymptoticProjector& proj) {
    const SuperOp q = proj.q_inf();
    const SuperOp shifted = l + proj.p_inf;
    Eigen::PartialPivLU<SuperOp> lu(shifted);
    const SuperOp inv = lu.solve(SuperOp::Identity(l.rows(), l.cols()));
    if ((shifted * inv - SuperOp::Identity(l.rows(), l.cols())).norm() >
        1e-7 * std::max(1.0, shifted.norm()))
        throw NumericalError("drazin_inverse: (L + Pinf) is numerically singular");
    return q * inv * q;
}

SuperOp shifted_drazin_inverse(const SuperOp& l, const AsymptoticBasis& basis, double delta) {
    SuperOp p_delta = SuperOp::Zero(l.rows(), l.cols());
    for (const auto& e : basis.entries)
        if (std::abs(e.delta - delta) <= 1e-9 * std::max(1.0, std::abs(delta)))
            p_delta += vectorize(e.psi) * vectorize(e.j).adjoint();
    const SuperOp q = SuperOp::Identity(l.rows(), l.cols()) - p_delta;
    const SuperOp shifted = l - I_UNIT * delta * SuperOp::Identity(l.rows(), l.cols()) + p_delta;
    Eigen::PartialPivLU<SuperOp> lu(shifted);
    const SuperOp inv = lu.solve(SuperOp::Identity(l.rows(), l.cols()));
    return q * inv * q;
}

SuperOp thu_drazin_inverse(const SuperOp& l, const CornerSplit& split,
                           const AsymptoticProjector& proj) {
    const Eigen::Index d = split.dim;
    const SuperOp to_ad = sandwich(split.frame.adjoint(), split.frame);
    const SuperOp from_ad = sandwich(split.frame, split.frame.adjoint());
    const SuperOp l_ad = to_ad * l * from_ad;
    const SuperOp p_psi_ad = to_ad * proj.p_psi * from_ad;

    std::vector<Eigen::Index> thu;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (!split.in_corner(Corner::LR, i, j)) thu.push_back(vec_index(i, j, d));
    const auto nb = static_cast<Eigen::Index>(thu.size());

    Mat t(nb, nb), p_sub(nb, nb);
    for (Eigen::Index a = 0; a < nb; ++a)
        for (Eigen::Index b = 0; b < nb; ++b) {
            t(a, b) = l_ad(thu[static_cast<size_t>(a)], thu[static_cast<size_t>(b)]);
            p_sub(a, b) = p_psi_ad(thu[static_cast<size_t>(a)], thu[static_cast<size_t>(b)]);
        }
    const Mat q_sub = Mat::Identity(nb, nb) - p_sub;
    Eigen::PartialPivLU<Mat> lu(t + p_sub);
    const Mat inv = lu.solve(Mat::Identity(nb, nb));
    if (((t + p_sub) * inv - Mat::Identity(nb, nb)).norm() > 1e-7 * std::max(1.0, t.norm()))
        throw NumericalError("thu_drazin_inverse: restricted block is singular");
    const Mat d_sub = q_sub * inv * q_sub;

    SuperOp out_ad = SuperOp::Zero(d * d, d * d);
    for (Eigen::Index a = 0; a < nb; ++a)
        for (Eigen::Index b = 0; b < nb; ++b)
            out_ad(thu[static_cast<size_t>(a)], thu[static_cast<size_t>(b)]) = d_sub(a, b);
    return from_ad * out_ad * to_ad;
}

KuboResult kubo_first_order(const SuperOp& l, const CornerSplit& split,
                            const AsymptoticProjector& proj, const SuperOp& o,
                            const Mat& a, const Mat& rho_inf, double t, bool sudden) {
    const Vec rho_v = vectorize(rho_inf);
    if ((l * rho_v).norm() > 1e-7 * std::max(1.0, rho_v.norm()))
        throw std::invalid_argument("kubo_first_order: initial state is not steady");
    const Vec a_v = vectorize(a);
    const Vec o_rho = o * rho_v;

    KuboResult res;
    res.zeno = a_v.dot(proj.p_inf * o_rho);
    const SuperOp thu_inv = thu_drazin_inverse(l, split, proj);
    res.leakage = a_v.dot(thu_inv * o_rho);
    res.value = t * res.zeno - res.leakage;
    if (sudden) {
        const SuperOp exp_tl = (t * l).exp();
        res.ringdown = a_v.dot(exp_tl * (thu_inv * o_rho));
        res.value += res.ringdown;
    }
    return res;
}

Mat zeno_matrix(const AsymptoticBasis& basis, const SuperOp& o) {
    const auto n = basis.size();
    Mat z(n, n);
    for (Eigen::Index mu = 0; mu < n; ++mu) {
        const Vec jv = vectorize(basis.entries[static_cast<size_t>(mu)].j);
        for (Eigen::Index nu = 0; nu < n; ++nu)
            z(mu, nu) = jv.dot(o * vectorize(basis.entries[static_cast<size_t>(nu)].psi));
    }
    return z;
}

Mat effective_hamiltonian(const LindbladSpec& base, const CornerSplit& split,
                          const NsBlock& block, const PerturbationSpec& pert) {
    const Eigen::Index d = block.dfs_dim, da = block.aux_dim;
    // isometry from the dfs (x) aux product space into the full Hilbert space
    Eigen::SelfAdjointEigenSolver<Mat> es(block.block_projector);
    Mat g(split.dim, d * da);
    Eigen::Index col = 0;
    for (Eigen::Index k = split.dim - 1; k >= 0 && col < d * da; --k)
        if (es.eigenvalues()(k) > 0.5) g.col(col++) = es.eigenvectors().col(k);
    require(col == d * da, "effective_hamiltonian: block projector rank mismatch");
    const Mat w = block.factor_frame;  // within-block product-basis rotation
    const Mat iso = g * w;

    auto compress = [&](const Mat& full) { return Mat(iso.adjoint() * full * iso); };
    auto weighted_trace = [&](const Mat& prod_basis_op) {
        Mat out = Mat::Zero(d, d);
        for (Eigen::Index k = 0; k < d; ++k)
            for (Eigen::Index m = 0; m < d; ++m)
                out(k, m) = (block.rho_ax.transpose() *
                             prod_basis_op.block(k * da, m * da, da, da))
                                .trace();
        return out;
    };

    Mat w_eff = Mat::Zero(d, d);
    if (pert.kind == PerturbationSpec::Kind::Hamiltonian) {
        w_eff = weighted_trace(compress(split.project(Corner::UL, pert.v)));
    } else if (pert.kind == PerturbationSpec::Kind::JumpShift) {
        const Mat f0_ul = split.project(Corner::UL, base.jumps[pert.jump_index].op);
        const Mat f_ul = split.project(Corner::UL, pert.f);
        const double kappa = base.jumps[pert.jump_index].rate;
        const Mat y = 0.5 * I_UNIT * kappa *
                      (f0_ul.adjoint() * f_ul - f_ul.adjoint() * f0_ul);
        w_eff = weighted_trace(compress(y));
    } else {
        throw std::invalid_argument("effective_hamiltonian: raw perturbations have no W/Y form");
    }
    return 0.5 * (w_eff + Mat(w_eff.adjoint()));
}

long long catalan_triangle(int n, int m) {
    require(n >= 0 && m >= 0 && m <= n, "catalan_triangle: need 0 <= M <= N");
    // (N+M)! (N+1-M) / (M! (N+1)!) = binomial(N+M, M) (N+1-M)/(N+1)
    long double val = n + 1 - m;
    for (int k = 1; k <= m; ++k) val *= static_cast<long double>(n + k) / k;
    val /= n + 1;
    return static_cast<long long>(std::llround(static_cast<double>(val)));
}

long long catalan_number(int n) { return catalan_triangle(n, n); }

namespace {

void enumerate_suffix(int n, int m, int pos, int suffix_sum, std::vector<int>& seq,
                      std::vector<std::vector<int>>& out) {
    // seq is filled from the tail: seq[pos] is being chosen, pos = n-1 .. 0.
    const int suffix_len = n - pos;  // length after choosing seq[pos]
    if (pos < 0) return;
    for (int v = 0; v + suffix_sum <= m; ++v) {
        seq[static_cast<size_t>(pos)] = v;
        const int s = suffix_sum + v;
        const bool last = pos == 0;
        if (last) {
            if (s == m) out.push_back(seq);
        } else if (s <= std::min(suffix_len, m)) {
            enumerate_suffix(n, m, pos - 1, s, seq, out);
        }
    }
    seq[static_cast<size_t>(pos)] = 0;
}

int nonzero_count(const std::vector<int>& seq) {
    int c = 0;
    for (int v : seq) c += v != 0;
    return c;
}

}  // namespace

std::vector<std::vector<int>> enumerate_sequences(int n, int m) {
    require(n >= 1 && m >= 0 && m <= n, "enumerate_sequences: need 1 <= N and 0 <= M <= N");
    std::vector<std::vector<int>> out;
    std::vector<int> seq(static_cast<size_t>(n), 0);
    enumerate_suffix(n, m, n - 1, 0, seq, out);
    std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
        const int na = nonzero_count(a), nb = nonzero_count(b);
        if (na != nb) return na > nb;
        return a < b;
    });
    return out;
}

std::vector<DysonTermInfo> dyson_term_table(int n) {
    std::vector<DysonTermInfo> table;
    for (int m = 0; m <= n; ++m) {
        for (auto& seq : enumerate_sequences(n, m)) {
            DysonTermInfo info;
            info.m = m;
            info.sign = nonzero_count(seq) % 2 == 0 ? +1 : -1;
            info.t_power = n - m;
            info.seq = std::move(seq);
            table.push_back(std::move(info));
        }
    }
    return table;
}

DysonOrder dyson_term(const SuperOp& l, const AsymptoticProjector& proj, const SuperOp& o,
                      int n, double t) {
    require(n >= 0, "dyson_term: order must be non-negative");
    const Eigen::Index d2 = l.rows();
    DysonOrder order;
    if (n == 0) {
        order.regular = proj.p_inf;
        order.secular = SuperOp::Zero(d2, d2);
        return order;
    }

    const SuperOp drazin = drazin_inverse(l, proj);
    std::vector<SuperOp> x_of_lambda;  // X(0) = Pinf O, X(k) = -L^-k O
    x_of_lambda.push_back(proj.p_inf * o);
    SuperOp power = SuperOp::Identity(d2, d2);
    for (int k = 1; k <= n; ++k) {
        power = power * drazin;
        x_of_lambda.push_back(-power * o);
    }

    order.regular = SuperOp::Zero(d2, d2);
    order.secular = SuperOp::Zero(d2, d2);
    order.terms = dyson_term_table(n);
    auto factorial = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    for (const auto& info : order.terms) {
        SuperOp prod = SuperOp::Identity(d2, d2);
        for (int v : info.seq) prod = prod * x_of_lambda[static_cast<size_t>(v)];
        prod = prod * proj.p_inf;
        order.regular += std::pow(t, info.t_power) / factorial(info.t_power) * prod;
        if (info.t_power >= 1)
            order.secular += std::pow(t, info.t_power - 1) / factorial(info.t_power - 1) * prod;
    }
    return order;
}

SuperOp second_order_leff(const SuperOp& l, const CornerSplit& split,
                          const AsymptoticProjector& proj, const SuperOp& o) {
    const SuperOp thu_inv = thu_drazin_inverse(l, split, proj);
    return -proj.p_inf * o * thu_inv * o * proj.p_psi;
}

LindbladSpec effective_operator_formalism(const LindbladSpec& spec, const CornerSplit& split,
                                          const Mat& v) {
    // Structural preconditions of the formalism route.
    for (const auto& j : spec.jumps)
        require((j.op - split.project(Corner::UR, j.op)).norm() <
                    1e-9 * std::max(1.0, j.op.norm()),
                "effective_operator_formalism: jumps must satisfy F = F_ur");
    require((spec.hamiltonian - split.project(Corner::LR, spec.hamiltonian)).norm() <
                1e-9 * std::max(1.0, spec.hamiltonian.norm()),
            "effective_operator_formalism: H must satisfy H = H_lr");
    require((v - split.project(Corner::UR, v) - split.project(Corner::LL, v)).norm() <
                1e-9 * std::max(1.0, v.norm()),
            "effective_operator_formalism: V must satisfy V = V_of");

    const Eigen::Index d = split.dim, r = split.rank, nq = d - r;
    Mat k_full = spec.hamiltonian;
    for (const auto& j : spec.jumps) k_full -= 0.5 * I_UNIT * j.rate * j.op.adjoint() * j.op;
    const Mat u_q = split.frame.rightCols(nq);
    const Mat k_q = u_q.adjoint() * k_full * u_q;
    Eigen::PartialPivLU<Mat> lu(k_q);
    const Mat k_q_inv = lu.solve(Mat::Identity(nq, nq));
    if ((k_q * k_q_inv - Mat::Identity(nq, nq)).norm() > 1e-8 * std::max(1.0, k_q.norm()))
        throw NumericalError("effective_operator_formalism: K is singular on lr");
    const Mat k_inv = u_q * k_q_inv * u_q.adjoint();

    Mat h_eff = -0.5 * v * (k_inv + Mat(k_inv.adjoint())) * v;
    h_eff = split.project(Corner::UL, h_eff);
    h_eff = 0.5 * (h_eff + Mat(h_eff.adjoint()));

    std::vector<Jump> jumps_eff;
    const Mat v_ll = split.project(Corner::LL, v);
    for (const auto& j : spec.jumps) jumps_eff.push_back({j.op * k_inv * v_ll, j.rate});
    return make_spec(h_eff, std::move(jumps_eff));
}

}  // namespace lindkit
