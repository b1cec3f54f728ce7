#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lindkit/models.hpp"
#include "lindkit/perturbation.hpp"
#include "test_support.hpp"

using namespace lindkit;
using testing::random_density;
using testing::random_matrix;

namespace {

// gauge-free comparison: the asymptotic projections built from the computed
// and the analytic (Psi, J) pairs must coincide
double analytic_match(const AsymptoticBasis& basis, const std::vector<AsymptoticEntry>& exact) {
    SuperOp p_exact = SuperOp::Zero(basis.dim * basis.dim, basis.dim * basis.dim);
    for (const auto& e : exact) p_exact += vectorize(e.psi) * vectorize(e.j).adjoint();
    return (basis.projector() - p_exact).norm();
}

}  // namespace

TEST_CASE("qubit dephasing: populations steady, J = Psi") {
    const auto model = models::qubit_dephasing();
    const auto basis = asymptotic_basis(build_superop(model.spec));
    REQUIRE(basis.size() == 2);
    for (const auto& e : basis.entries) {
        CHECK(e.delta == 0.0);
        CHECK((e.psi - e.j).norm() < 1e-9);
        CHECK((e.psi - Mat(e.psi.cwiseProduct(identity(2)))).norm() < 1e-10);  // diagonal
    }
}

TEST_CASE("three-level extension catches the decayed population") {
    const auto model = models::qubit_dephasing(true);
    const auto basis = asymptotic_basis(build_superop(model.spec));
    REQUIRE(basis.size() == 2);
    for (const auto& e : model.analytic) {
        CHECK(apply_adjoint(model.spec, e.j).norm() < 1e-10);
        CHECK(apply_lindblad(model.spec, e.psi).norm() < 1e-10);
    }
    CHECK(analytic_match(basis, model.analytic) < 1e-8);
}

TEST_CASE("identity is always a stationary conserved quantity") {
    const auto spec = testing::random_lindblad(4);
    const auto sectors = conserved_direct(build_superop(spec));
    bool found = false;
    for (const auto& sec : sectors) {
        if (std::abs(sec.delta) > 1e-9) continue;
        for (const auto& j : sec.ops) {
            const Mat scaled = j * (4.0 / j.trace());
            if ((scaled - identity(4)).norm() < 1e-6) found = true;
        }
        // at least: identity lies in the span of the stationary lefts
        Mat residual = identity(4);
        std::vector<Mat> span = sec.ops;
        for (auto& s : span) s /= s.norm();
        for (int sweep = 0; sweep < 3; ++sweep)
            for (const auto& s : span) residual -= s * hs_inner(s, residual);
        if (residual.norm() < 1e-7) found = true;
    }
    CHECK(found);
}

TEST_CASE("d-photon absorption: diagonal conserved quantities are projectors") {
    const auto model = models::d_photon(2, 16);
    const auto basis = asymptotic_basis(build_superop(model.spec));
    REQUIRE(basis.size() == 4);
    // stationary sector spans {Pi_0, Pi_1} on the diagonal parts
    for (int k = 0; k < 2; ++k) {
        const Mat jkk = model.analytic_j(k, k);
        CHECK((jkk - model.projectors[static_cast<size_t>(k)]).norm() < 1e-12);
        CHECK(apply_adjoint(model.spec, jkk).norm() < 1e-10);
    }
}

TEST_CASE("biorthogonalize recovers duality from a random remix") {
    const auto model = models::two_qubit(models::TwoQubitVariant::JumpDephased, 0.9);
    const SuperOp l = build_superop(model.spec);
    auto rights = steady_basis(l);
    auto lefts = conserved_direct(l);
    // remix the stationary rights by a random invertible matrix
    for (auto& sec : rights) {
        if (std::abs(sec.delta) > 1e-9) continue;
        const auto n = sec.ops.size();
        const Mat r = random_matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        std::vector<Mat> mixed(n, Mat::Zero(4, 4));
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) mixed[a] += r(static_cast<Eigen::Index>(a),
                                                         static_cast<Eigen::Index>(b)) * sec.ops[b];
        sec.ops = mixed;
    }
    const auto basis = biorthogonalize(rights, lefts);
    for (Eigen::Index a = 0; a < basis.size(); ++a)
        for (Eigen::Index b = 0; b < basis.size(); ++b) {
            const cxd g = hs_inner(basis.entries[static_cast<size_t>(a)].j,
                                   basis.entries[static_cast<size_t>(b)].psi);
            CHECK(std::abs(g - (a == b ? cxd(1.0) : cxd(0.0))) < 1e-8);
        }
}

TEST_CASE("driven two-qubit: the analytic scale factor appears in J") {
    const double gamma = 0.8;
    const auto model = models::two_qubit(models::TwoQubitVariant::Driven, 0, 0, gamma);
    // analytic data is self-consistent with the generator
    for (const auto& e : model.analytic) {
        CHECK(apply_lindblad(model.spec, e.psi).norm() < 1e-12);
        CHECK(apply_adjoint(model.spec, e.j).norm() < 1e-12);
        CHECK(std::abs(hs_inner(e.j, e.psi) - cxd(1.0)) < 1e-12);
    }
    // and the pipeline reproduces the same asymptotic projection
    const auto basis = asymptotic_basis(build_superop(model.spec));
    SuperOp p_exact = SuperOp::Zero(16, 16);
    for (const auto& e : model.analytic)
        p_exact += vectorize(e.psi) * vectorize(e.j).adjoint();
    CHECK((basis.projector() - p_exact).norm() < 1e-8);
}

TEST_CASE("analytic conserved quantities via the lr inverse formula") {
    SUBCASE("jump-dephased coherence suppression 1/(1+2a^2)") {
        const double alpha = 1.3;
        const auto model = models::two_qubit(models::TwoQubitVariant::JumpDephased, alpha);
        const auto split = make_corner_split(model.p);
        const Mat j_ul = model.analytic[1].psi;  // Psi_01 = |psi0><psi1|, also J_ul
        const auto js = conserved_analytic(model.spec, split, {j_ul}, 0.0);
        CHECK((js[0] - model.analytic[1].j).norm() < 1e-10);
        const cxd lr_entry = js[0](2, 3);
        CHECK(std::abs(lr_entry - cxd(1.0 / (1.0 + 2.0 * alpha * alpha))) < 1e-10);
    }
    SUBCASE("Hamiltonian suppression 1/(1+i beta)") {
        const double beta = 0.7;
        const auto model = models::two_qubit(models::TwoQubitVariant::HamSuppressed, 0.0, beta);
        const auto split = make_corner_split(model.p);
        // entry (0,1) has delta = -beta
        const auto& ref = model.analytic[1];
        REQUIRE(ref.delta == doctest::Approx(-beta));
        const auto js = conserved_analytic(model.spec, split, {ref.psi}, ref.delta);
        CHECK((js[0] - ref.j).norm() < 1e-10);
        CHECK(std::abs(js[0](2, 3) - cxd(1.0) / (1.0 + I_UNIT * beta)) < 1e-10);
        // the adjoint pair carries the conjugate factor: together they
        // realize the suppression pattern 1/(1 +- i beta)
        const auto& ref10 = model.analytic[2];
        const auto js10 = conserved_analytic(model.spec, split, {ref10.psi}, ref10.delta);
        CHECK(std::abs(js10[0](3, 2) - cxd(1.0) / (1.0 - I_UNIT * beta)) < 1e-10);
    }
    SUBCASE("compensated case restores the unit lr coefficient") {
        const double ab = 0.9;
        const auto model = models::two_qubit(models::TwoQubitVariant::Compensated, ab, ab);
        const auto split = make_corner_split(model.p);
        const auto& ref = model.analytic[1];
        const auto js = conserved_analytic(model.spec, split, {ref.psi}, ref.delta);
        CHECK(std::abs(js[0](2, 3) - cxd(1.0)) < 1e-10);
    }
}

TEST_CASE("analytic route matches the spectral route on rotating sectors") {
    const auto model = models::two_qubit(models::TwoQubitVariant::HamSuppressed, 0.0, 1.1);
    const SuperOp l = build_superop(model.spec);
    const auto basis = asymptotic_basis(l);
    const auto split = make_corner_split(model.p);
    for (const auto& e : basis.entries) {
        const Mat j_ul = split.project(Corner::UL, e.j);
        const auto js = conserved_analytic(model.spec, split, {j_ul}, e.delta);
        CHECK((js[0] - e.j).norm() < 1e-8);
    }
}

TEST_CASE("asymptotic projector identities") {
    const auto model = models::two_qubit(models::TwoQubitVariant::JumpDephased, 0.8);
    const SuperOp l = build_superop(model.spec);
    const auto basis = asymptotic_basis(l);
    const auto split = make_corner_split(model.p);
    const auto proj = asymptotic_projector(basis, split);

    CHECK((proj.p_inf * proj.p_inf - proj.p_inf).norm() < 1e-8);
    // trace functional is fixed: <<I|Pinf = <<I|
    const Vec idv = vectorize(identity(4));
    CHECK(((proj.p_inf.adjoint() * idv) - idv).norm() < 1e-8);
    // no coherence survival between the P and Q sectors
    CHECK((proj.p_inf * split.r_of()).norm() < 1e-9);
    // Pinf = P_Psi (Id - L L_lr^-1): check on a full superoperator identity
    const auto part = partition(l, split);
    // L L_lr^-1 on the lr corner: solve on lr and compare columnwise
    const SuperOp r_lr = split.r_lr();
    // restricted inverse via conserved_analytic-style solve is exercised
    // elsewhere; here check the defining property Pinf L = 0 for delta = 0
    CHECK((proj.p_inf * l).norm() < 1e-8 * std::max(1.0, l.norm()));
    CHECK((l * proj.p_inf).norm() < 1e-8 * std::max(1.0, l.norm()));
}

TEST_CASE("maindecomp identity: Pinf = P_Psi (Id - L L_lr^-1)") {
    const auto model = models::two_qubit(models::TwoQubitVariant::JumpDephased, 0.8);
    const SuperOp l = build_superop(model.spec);
    const auto basis = asymptotic_basis(l);
    const auto split = make_corner_split(model.p);
    const auto proj = asymptotic_projector(basis, split);

    // build L_lr^-1 as a full superoperator supported on the lr pairs
    const SuperOp to_ad = sandwich(split.frame.adjoint(), split.frame);
    const SuperOp from_ad = sandwich(split.frame, split.frame.adjoint());
    const SuperOp l_ad = to_ad * l * from_ad;
    const auto lr = split.corner_pairs(Corner::LR);
    const auto nlr = static_cast<Eigen::Index>(lr.size());
    Mat sub(nlr, nlr);
    for (Eigen::Index a = 0; a < nlr; ++a)
        for (Eigen::Index b = 0; b < nlr; ++b)
            sub(a, b) = l_ad(lr[static_cast<size_t>(a)], lr[static_cast<size_t>(b)]);
    const Mat sub_inv = sub.inverse();
    SuperOp lr_inv_ad = SuperOp::Zero(16, 16);
    for (Eigen::Index a = 0; a < nlr; ++a)
        for (Eigen::Index b = 0; b < nlr; ++b)
            lr_inv_ad(lr[static_cast<size_t>(a)], lr[static_cast<size_t>(b)]) = sub_inv(a, b);
    const SuperOp lr_inv = from_ad * lr_inv_ad * to_ad;

    const SuperOp reconstructed =
        proj.p_psi * (SuperOp::Identity(16, 16) - l * lr_inv);
    CHECK((reconstructed - proj.p_inf).norm() < 1e-8);
}

TEST_CASE("infinite-time state: two-photon absorption from a coherent state") {
    const cxd beta(1.1, 0.4);
    const auto model = models::d_photon(2, 24);
    const auto basis = asymptotic_basis(build_superop(model.spec));
    const auto st = coherent_state(beta, 24);
    REQUIRE(st.tail_mass < 1e-12);
    const Mat rho_in = st.amplitudes * st.amplitudes.adjoint();
    const Mat rho_out = infinite_time_state(basis, rho_in, 0.0);

    const Mat closed = model.steady_from_coherent_d2(beta);
    CHECK(std::abs(rho_out(0, 0) - closed(0, 0)) < 1e-8);
    CHECK(std::abs(rho_out(1, 1) - closed(1, 1)) < 1e-8);
    CHECK(std::abs(rho_out(0, 1) - closed(0, 1)) < 1e-8);
    // everything else decays
    Mat tail = rho_out;
    tail.topLeftCorner(2, 2).setZero();
    CHECK(tail.norm() < 1e-8);
}

TEST_CASE("infinite-time state agrees with long-time propagation") {
    const auto model = models::two_qubit(models::TwoQubitVariant::JumpDephased, 0.9);
    const SuperOp l = build_superop(model.spec);
    const auto basis = asymptotic_basis(l);
    const Mat rho_in = random_density(4);
    const double t_final = 20.0 / dissipative_gap(l);
    const Mat direct = propagate(l, rho_in, t_final);
    const Mat via_basis = infinite_time_state(basis, rho_in, 0.0);
    CHECK((direct - via_basis).norm() < 1e-5);

    // a state already in the asymptotic subspace is reproduced exactly
    const Mat rho_ash = infinite_time_state(basis, via_basis / via_basis.trace(), 0.0);
    CHECK((rho_ash * via_basis.trace() - via_basis).norm() < 1e-8);

    CHECK_THROWS_AS(infinite_time_state(basis, Mat(2.0 * rho_in), 0.0), std::invalid_argument);
}

TEST_CASE("cat pump: fixed parity converges to a pure cat, split input to P/2") {
    const auto model = models::two_cat_pump(1.0, 20);
    const auto basis = asymptotic_basis(build_superop(model.spec));

    // even-parity initial state: the vacuum
    Mat rho_even = Mat::Zero(21, 21);
    rho_even(0, 0) = 1.0;
    const Mat out_even = infinite_time_state(basis, rho_even, 0.0);
    CHECK((out_even - Mat(model.cat0 * model.cat0.adjoint())).norm() < 1e-7);
    CHECK(std::abs((out_even * out_even).trace().real() - 1.0) < 1e-7);

    // one branch already in ASH, the other far outside: coherences are lost
    const double alpha = 1.0;
    const Vec inside = coherent_state(alpha, 20).amplitudes;
    const Vec outside = coherent_state(cxd(0.0, 2.0), 20).amplitudes;
    Vec cat = (inside + outside);
    cat /= cat.norm();
    const Mat out_mixed = infinite_time_state(basis, Mat(cat * cat.adjoint()), 0.0);
    const double purity = (out_mixed * out_mixed).trace().real();
    CHECK(purity < 0.72);  // far from pure; exactly 1/2 only at large alpha
}

TEST_CASE("structure classification across the catalog") {
    SUBCASE("classical simplex for qubit dephasing") {
        const auto model = models::qubit_dephasing();
        const SuperOp l = build_superop(model.spec);
        const auto st = classify_structure(asymptotic_basis(l), find_nondecay_projector(l));
        CHECK(st.kind == AshKind::ClassicalSimplex);
        CHECK(st.blocks.size() == 2);
    }
    SUBCASE("DFS for the clean two-qubit case") {
        const auto model = models::two_qubit(models::TwoQubitVariant::Clean);
        const SuperOp l = build_superop(model.spec);
        const auto st = classify_structure(asymptotic_basis(l), make_corner_split(model.p));
        CHECK(st.kind == AshKind::DFS);
        REQUIRE(st.blocks.size() == 1);
        CHECK(st.blocks[0].dfs_dim == 2);
        CHECK(st.blocks[0].aux_dim == 1);
    }
    SUBCASE("NS for the driven two-qubit case, with the printed aux data") {
        const double gamma = 0.8;
        const auto model = models::two_qubit(models::TwoQubitVariant::Driven, 0, 0, gamma);
        const SuperOp l = build_superop(model.spec);
        const auto st = classify_structure(asymptotic_basis(l), make_corner_split(model.p));
        CHECK(st.kind == AshKind::NS);
        REQUIRE(st.blocks.size() == 1);
        const auto& blk = st.blocks[0];
        CHECK(blk.dfs_dim == 2);
        CHECK(blk.aux_dim == 2);
        CHECK(blk.n_ax == doctest::Approx(model.n_ax).epsilon(1e-8));
        // rho_ax is basis-dependent; its spectrum is not
        Eigen::SelfAdjointEigenSolver<Mat> got(blk.rho_ax), want(model.rho_ax);
        CHECK((got.eigenvalues() - want.eigenvalues()).norm() < 1e-8);
    }
    SUBCASE("gamma -> 0 reduces the NS to a DFS") {
        const auto model = models::two_qubit(models::TwoQubitVariant::Driven, 0, 0, 1e-5);
        const SuperOp l = build_superop(model.spec);
        const auto split = find_nondecay_projector(l);
        const auto st = classify_structure(asymptotic_basis(l), split);
        // at machine-small gamma the support rank collapses back to the DFS
        CHECK((st.kind == AshKind::DFS ||
               (st.kind == AshKind::NS && st.blocks[0].n_ax > 0.999)));
    }
    SUBCASE("unique steady state") {
        FockSpace fock(8);
        const auto spec = jump_only(fock.a);
        const SuperOp l = build_superop(spec);
        const auto st = classify_structure(asymptotic_basis(l), find_nondecay_projector(l));
        CHECK(st.kind == AshKind::Unique);
    }
}

TEST_CASE("channel embedding reproduces the channel through Pinf R_lr") {
    // amplitude-reset channel on a 4-level system: lr (levels 2,3) is mapped
    // onto ul (levels 0,1) by two Kraus isometries
    Mat p = Mat::Zero(4, 4);
    p(0, 0) = p(1, 1) = 1.0;
    const auto split = make_corner_split(p);
    Mat k1 = Mat::Zero(4, 4), k2 = Mat::Zero(4, 4);
    k1(0, 2) = 1.0;
    k1(1, 3) = std::sqrt(0.5);
    k2(0, 3) = std::sqrt(0.5);
    const auto spec = channel_embedding({k1, k2}, split);
    const SuperOp l = build_superop(spec);
    const auto proj = asymptotic_projector(asymptotic_basis(l), split);

    // uniform decay structure of the embedded Lindbladian
    const auto part = partition(l, split);
    CHECK((part.l_of + 0.5 * split.r_of()).norm() < 1e-10);
    CHECK((part.l_lr + split.r_lr()).norm() < 1e-10);

    // Pinf R_lr equals the channel and the bare transfer map
    SuperOp channel = SuperOp::Zero(16, 16);
    for (const auto& k : {k1, k2}) channel += sandwich(k, k.adjoint());
    CHECK((proj.p_inf * split.r_lr() - channel * split.r_lr()).norm() < 1e-8);
    CHECK((part.transfer - channel * split.r_lr()).norm() < 1e-10);

    // completeness violations are rejected
    CHECK_THROWS_AS(channel_embedding({k1}, split), std::invalid_argument);
}

TEST_CASE("noether checks on the three paper examples") {
    SUBCASE("two-photon parity: conserved, commuting, a symmetry") {
        const auto model = models::d_photon(2, 14);
        const Mat parity = model.projectors[0] - model.projectors[1];
        const auto rep = noether_checks(model.spec, parity);
        CHECK(rep.conserved());
        CHECK(rep.commutes());
        CHECK(rep.symmetry());
    }
    SUBCASE("J01 of two-photon absorption: conserved but not commuting") {
        const auto model = models::d_photon(2, 30);
        const Mat j01 = model.analytic_j(0, 1) + model.analytic_j(1, 0);  // hermitized
        const auto rep = noether_checks(model.spec, j01);
        CHECK(rep.conserved());
        CHECK(!rep.commutes(1e-3));
    }
    SUBCASE("number operator with photon loss: symmetry but not conserved") {
        FockSpace fock(12);
        const auto spec = jump_only(fock.a);
        const auto rep = noether_checks(spec, fock.n);
        CHECK(!rep.conserved(1e-3));
        CHECK(rep.symmetry());
    }
}
