#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lindkit/lindblad.hpp"
#include "test_support.hpp"

using namespace lindkit;
using testing::random_density;
using testing::random_hermitian;
using testing::random_lindblad;
using testing::random_matrix;

TEST_CASE("qubit dephasing superoperator acts as Z rho Z - rho") {
    const auto spec = jump_only(pauli_z());
    const SuperOp l = build_superop(spec);
    const Mat rho = random_density(2);
    const Mat expected = pauli_z() * rho * pauli_z() - rho;
    CHECK((devectorize(l * vectorize(rho), 2) - expected).norm() < 1e-13);
}

TEST_CASE("spec validation rejects bad input") {
    Mat h = random_matrix(2, 2);  // not Hermitian with overwhelming probability
    CHECK_THROWS_AS(make_spec(h, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_spec(identity(2), {{pauli_x(), -1.0}}), std::invalid_argument);
}

TEST_CASE("trace preservation and Hermiticity preservation") {
    const auto spec = random_lindblad(4);
    const SuperOp l = build_superop(spec);
    const Vec id_v = vectorize(identity(4));
    CHECK((l.adjoint() * id_v).norm() < 1e-10 * l.norm());  // <<I|L = 0

    const Mat a = random_matrix(4, 4);
    const Mat la = apply_lindblad(spec, a);
    const Mat lad = apply_lindblad(spec, a.adjoint());
    CHECK((lad - Mat(la.adjoint())).norm() < 1e-12 * la.norm());
}

TEST_CASE("adjoint generator") {
    const auto spec = random_lindblad(3);
    CHECK((build_adjoint(spec) - superop_adjoint(build_superop(spec))).norm() < 1e-12);
    // identity is conserved
    CHECK(apply_adjoint(spec, identity(3)).norm() < 1e-12);

    // Hermitian jump: L^ddag = L
    const auto dephasing = jump_only(pauli_z());
    CHECK((build_adjoint(dephasing) - build_superop(dephasing)).norm() < 1e-13);

    // photon loss: L^ddag(n) = -kappa n
    FockSpace fock(20);
    const double kappa = 0.7;
    const auto loss = make_spec(Mat::Zero(21, 21), {{fock.a, kappa}});
    CHECK((apply_adjoint(loss, fock.n) + kappa * fock.n).norm() < 1e-12);
}

TEST_CASE("gauge transform leaves the superoperator invariant") {
    // two-photon pump split into a^2 plus squeezing Hamiltonian
    const Eigen::Index nm = 14;
    FockSpace fock(nm);
    const double alpha2 = 1.3;
    const auto pump = jump_only(fock.a * fock.a - alpha2 * identity(nm + 1));
    const auto split = gauge_transform(pump, {cxd(alpha2, 0.0)});
    CHECK((split.jumps[0].op - Mat(fock.a * fock.a)).norm() < 1e-13);
    CHECK(split.hamiltonian.norm() > 0.1);  // squeezing term appeared
    CHECK((build_superop(split) - build_superop(pump)).norm() < 1e-10);

    // g = 0 leaves the spec untouched
    const auto same = gauge_transform(pump, {cxd(0.0, 0.0)});
    CHECK((same.jumps[0].op - pump.jumps[0].op).norm() == 0.0);
    CHECK(same.hamiltonian.norm() == 0.0);

    // random spec, random g
    const auto spec = random_lindblad(4);
    const auto moved = gauge_transform(spec, {cxd(0.3, -0.8), cxd(-1.1, 0.2)});
    CHECK((build_superop(moved) - build_superop(spec)).norm() < 1e-10);
}

TEST_CASE("spectrum of qubit dephasing is {0, 0, -2, -2}") {
    const auto res = spectrum(build_superop(jump_only(pauli_z())));
    std::vector<double> re;
    for (Eigen::Index k = 0; k < 4; ++k) {
        re.push_back(res.eigenvalues(k).real());
        CHECK(std::abs(res.eigenvalues(k).imag()) < 1e-12);
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-2.0));
    CHECK(re[1] == doctest::Approx(-2.0));
    CHECK(re[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(re[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("unitary generator has purely imaginary spectrum") {
    const Mat h = random_hermitian(3);
    const auto res = spectrum(hamiltonian_superop(h));
    for (Eigen::Index k = 0; k < res.eigenvalues.size(); ++k)
        CHECK(std::abs(res.eigenvalues(k).real()) < 1e-10 * res.scale);
}

TEST_CASE("eigenvalues sit in the closed left half plane, in conjugate pairs") {
    const auto res = spectrum(build_superop(random_lindblad(3)));
    for (const auto& c : res.clusters) {
        CHECK(c.value.real() <= res.zero_tol);
        if (std::abs(c.value.imag()) > 1e-8 * res.scale) {
            bool found_conjugate = false;
            for (const auto& other : res.clusters)
                if (std::abs(other.value - std::conj(c.value)) < 1e-6 * res.scale)
                    found_conjugate = true;
            CHECK(found_conjugate);
        }
    }
}

TEST_CASE("peripheral clusters are diagonalizable") {
    const auto res = spectrum(build_superop(random_lindblad(3)));
    for (const auto& c : res.clusters)
        if (res.is_peripheral(c)) CHECK(!c.defective);
}

TEST_CASE("propagate: identity at t=0, coherence decay, semigroup") {
    const auto spec = jump_only(pauli_z());
    const SuperOp l = build_superop(spec);
    Mat plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    CHECK((propagate(l, plus, 0.0) - plus).norm() == 0.0);

    const double t = 0.37;
    const Mat rho_t = propagate(l, plus, t);
    CHECK(rho_t(0, 1).real() == doctest::Approx(0.5 * std::exp(-2.0 * t)).epsilon(1e-10));
    CHECK(rho_t(0, 0).real() == doctest::Approx(0.5));

    const auto generic = random_lindblad(3);
    const SuperOp lg = build_superop(generic);
    const Mat rho = random_density(3);
    const Mat one_shot = propagate(lg, rho, 0.9);
    const Mat two_step = propagate(lg, propagate(lg, rho, 0.4), 0.5);
    CHECK((one_shot - two_step).norm() < 1e-8);

    // physicality of the propagated state
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (one_shot + Mat(one_shot.adjoint())));
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
    CHECK(std::abs(one_shot.trace() - cxd(1.0)) < 1e-8);
    CHECK_THROWS_AS(propagate(lg, rho, -1.0), std::invalid_argument);
}

TEST_CASE("dissipative gap") {
    CHECK(dissipative_gap(build_superop(jump_only(pauli_z()))) == doctest::Approx(2.0));
    CHECK_THROWS_AS(dissipative_gap(hamiltonian_superop(random_hermitian(2))), NumericalError);
}

TEST_CASE("unitary-generator detection in a Hermitian basis") {
    const auto basis = hermitian_basis(3);
    CHECK(is_unitary_generator(hamiltonian_superop(random_hermitian(3)), basis));
    CHECK(!is_unitary_generator(build_superop(jump_only(pauli_z())), hermitian_basis(2)));

    // L_{kappa lambda} is real for any Lindbladian
    double max_imag = 0.0;
    real_basis_matrix(build_superop(random_lindblad(3)), basis, &max_imag);
    CHECK(max_imag < 1e-10);
}

TEST_CASE("sector_block agrees with the full superoperator") {
    FockSpace fock(6);
    const auto spec = jump_only(fock.a);
    std::vector<Eigen::Index> all(7);
    std::iota(all.begin(), all.end(), 0);
    // full index set reproduces the dense superoperator
    CHECK((sector_block(spec, all, all) - build_superop(spec)).norm() < 1e-12);

    // two-photon absorption: the even-even parity sector is invariant and its
    // eigenvalues are a subset of the full spectrum
    FockSpace fock2(9);
    const auto twophoton = jump_only(fock2.a * fock2.a);
    std::vector<Eigen::Index> even;
    for (Eigen::Index n = 0; n <= 9; n += 2) even.push_back(n);
    const Mat block = sector_block(twophoton, even, even);
    Eigen::ComplexEigenSolver<Mat> es(block, false);
    const auto full = spectrum(build_superop(twophoton));
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        double best = 1e300;
        for (Eigen::Index m = 0; m < full.eigenvalues.size(); ++m)
            best = std::min(best, std::abs(full.eigenvalues(m) - es.eigenvalues()(k)));
        CHECK(best < 1e-8 * std::max(1.0, full.scale));
    }
}
