#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lindkit/asymptotics.hpp"
#include "lindkit/models.hpp"
#include "test_support.hpp"

using namespace lindkit;
using testing::random_density;
using testing::random_hermitian;
using testing::random_lindblad;

TEST_CASE("Hamiltonian-only evolution has no decaying subspace") {
    const auto split = find_nondecay_projector(hamiltonian_superop(random_hermitian(3)));
    CHECK((split.p - identity(3)).norm() < 1e-9);
    CHECK(split.rank == 3);
}

TEST_CASE("two-qubit clean case: P projects on the Bell DFS") {
    const auto model = models::two_qubit(models::TwoQubitVariant::Clean);
    const auto split = find_nondecay_projector(build_superop(model.spec));
    CHECK((split.p - model.p).norm() < 1e-9);
    CHECK(split.rank == 2);
}

TEST_CASE("cat pump at large alpha: P is close to the coherent-state pair") {
    const double alpha = 2.2;
    const auto model = models::two_cat_pump(alpha, 28);
    const auto split = find_nondecay_projector(build_superop(model.spec));
    const Vec plus = coherent_state(alpha, 28).amplitudes;
    const Vec minus = coherent_state(-alpha, 28).amplitudes;
    const Mat coherent_pair = plus * plus.adjoint() + minus * minus.adjoint();
    CHECK(split.rank == 2);
    // analytic cats vs the steady support of the truncated generator:
    // the difference is a pure truncation-boundary effect
    CHECK((split.p - model.p).norm() < 1e-5);
    CHECK((split.p - coherent_pair).norm() < 1e-3);  // up to e^{-2 alpha^2} overlaps
}

TEST_CASE("superprojections form an orthogonal resolution of the identity") {
    const auto split = make_corner_split(models::two_qubit(models::TwoQubitVariant::Clean).p);
    const SuperOp projs[4] = {split.r_ul(), split.r_ur(), split.r_ll(), split.r_lr()};
    SuperOp sum = SuperOp::Zero(16, 16);
    for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y) {
            const SuperOp prod = projs[x] * projs[y];
            if (x == y)
                CHECK((prod - projs[x]).norm() < 1e-13);
            else
                CHECK(prod.norm() < 1e-13);
        }
        sum += projs[x];
    }
    CHECK((sum - SuperOp::Identity(16, 16)).norm() < 1e-13);
    CHECK((split.r_of() - projs[1] - projs[2]).norm() == 0.0);
    CHECK((split.r_di() - projs[0] - projs[3]).norm() == 0.0);
    CHECK((split.r_thu() + projs[3] - SuperOp::Identity(16, 16)).norm() == 0.0);
}

TEST_CASE("adjoint of the ur corner lands in ll") {
    const auto split = make_corner_split(models::two_qubit(models::TwoQubitVariant::Clean).p);
    const Mat a = testing::random_matrix(4, 4);
    CHECK((Mat(split.project(Corner::UR, a).adjoint()) -
           split.project(Corner::LL, a.adjoint()))
              .norm() < 1e-13);
}

TEST_CASE("block partition is upper triangular for a valid Lindbladian") {
    for (int variant = 0; variant < 3; ++variant) {
        const auto model = models::two_qubit(static_cast<models::TwoQubitVariant>(variant), 0.8,
                                             0.9, 0.0);
        const SuperOp l = build_superop(model.spec);
        const auto split = find_nondecay_projector(l);
        const auto part = partition(l, split);
        CHECK(part.lower_residual < 1e-9 * l.norm());
    }
}

TEST_CASE("semisimple DFS: L_ul vanishes and of-block decouples from ul") {
    const auto model = models::two_qubit(models::TwoQubitVariant::Clean);
    const SuperOp l = build_superop(model.spec);
    const auto split = make_corner_split(model.p);
    const auto part = partition(l, split);
    CHECK(part.l_ul.norm() < 1e-12);
    CHECK((split.r_ul() * l * split.r_of()).norm() < 1e-12);
}

TEST_CASE("F = F_ur only: of<-lr coupling vanishes") {
    const auto model = models::two_qubit(models::TwoQubitVariant::Clean);
    const SuperOp l = build_superop(model.spec);
    const auto split = make_corner_split(model.p);
    CHECK((split.r_of() * l * split.r_lr()).norm() < 1e-12);
}

TEST_CASE("transfer term has the Kraus form sum F_ur rho F_ur^dag") {
    const auto model = models::two_qubit(models::TwoQubitVariant::JumpDephased, 0.7);
    const SuperOp l = build_superop(model.spec);
    const auto split = make_corner_split(model.p);
    const auto part = partition(l, split);
    SuperOp expected = SuperOp::Zero(16, 16);
    for (const auto& j : model.spec.jumps) {
        const Mat f_ur = split.project(Corner::UR, j.op);
        expected += j.rate * sandwich(f_ur, f_ur.adjoint());
    }
    CHECK((part.transfer - expected).norm() < 1e-12);
}

TEST_CASE("decay conditions: clean case passes, planted violation is flagged") {
    const auto model = models::two_qubit(models::TwoQubitVariant::Clean);
    const auto split = make_corner_split(model.p);
    CHECK(verify_decay_conditions(model.spec, split).max_residual() < 1e-12);

    // cat pump satisfies the H_ur condition with H = 0 and F_ul = 0
    const auto cat = models::two_cat_pump(1.0, 24);
    const auto cat_split = make_corner_split(cat.p);
    CHECK(verify_decay_conditions(cat.spec, cat_split).max_residual() < 1e-8);

    // a jump with F_ll != 0 against the declared P
    LindbladSpec bad = model.spec;
    Mat ll_piece = Mat::Zero(4, 4);
    ll_piece(2, 0) = 0.5;  // |psi0_perp><psi0|
    bad.jumps[0].op += ll_piece;
    const auto rep = verify_decay_conditions(bad, split);
    CHECK(rep.f_ll_norms[0] > 0.4);
}

TEST_CASE("Q rho Q decays at the gap rate") {
    const auto model = models::two_qubit(models::TwoQubitVariant::JumpDephased, 1.1);
    const SuperOp l = build_superop(model.spec);
    const auto split = make_corner_split(model.p);
    const double gap = dissipative_gap(l);
    const double t_final = 20.0 / gap;
    const Mat rho_t = propagate(l, random_density(4), t_final);
    CHECK(split.project(Corner::LR, rho_t).norm() < 1e-5);
}

TEST_CASE("effective dissipative gap bounds the dissipative gap") {
    for (const char* name : {"two_qubit:clean", "two_qubit:jump-dephased", "two_qubit:driven"}) {
        const auto built = models::build_catalog(name, {{"alpha", 0.8}, {"gamma", 0.6}});
        const SuperOp l = build_superop(built.spec);
        const auto split = find_nondecay_projector(l);
        const double edg = effective_dissipative_gap(built.spec, split);
        const double dg = dissipative_gap(l);
        CHECK(edg >= dg - 1e-9 * std::max(1.0, dg));
    }
}

TEST_CASE("cat pump: H_edg ground states are the cat states, gap identity") {
    const double alpha = 1.5;
    const auto model = models::two_cat_pump(alpha, 30);
    const Mat h_edg = decoherence_hamiltonian(model.spec);

    // closed form (1/2)[n(n-1) - alpha^2 (a^2 + a^dag^2) + alpha^4]
    FockSpace fock(30);
    const Mat expected =
        0.5 * (fock.n * (fock.n - identity(31)) -
               alpha * alpha * (fock.a * fock.a + fock.adag * fock.adag) +
               std::pow(alpha, 4) * identity(31));
    CHECK((h_edg - expected).norm() < 1e-10);

    CHECK((h_edg * model.cat0).norm() < 1e-9);
    CHECK((h_edg * model.cat1).norm() < 1e-9);

    const auto split = make_corner_split(model.p);
    const double edg = effective_dissipative_gap(model.spec, split);
    Eigen::SelfAdjointEigenSolver<Mat> es(h_edg);
    double excitation = 1e300;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) > 1e-6) excitation = std::min(excitation, es.eigenvalues()(k));
    CHECK(std::abs(edg - excitation) < 1e-8 * excitation);
}

TEST_CASE("cat pump above the crossover: Delta_edg strictly exceeds Delta_dg") {
    const auto model = models::two_cat_pump(2.0, 26);
    const SuperOp l = build_superop(model.spec);
    const auto split = make_corner_split(model.p);
    const double edg = effective_dissipative_gap(model.spec, split);
    const double dg = dissipative_gap(l);
    CHECK(edg > dg * 1.05);
}

TEST_CASE("kappa robustness of the two-qubit split") {
    const auto model = models::two_qubit(models::TwoQubitVariant::Clean);
    const auto split = make_corner_split(model.p);
    CHECK(is_kappa_robust(model.spec, split));
}

TEST_CASE("effective gap errors out for unitary generators") {
    LindbladSpec unitary = make_spec(random_hermitian(3), {});
    const auto split = make_corner_split(identity(3));
    CHECK_THROWS_AS(effective_dissipative_gap(unitary, split), NumericalError);
}
