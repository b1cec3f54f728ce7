#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lindkit/core.hpp"
#include "test_support.hpp"

using namespace lindkit;
using testing::random_matrix;
using testing::random_hermitian;

TEST_CASE("vectorize round trip and outer products") {
    const Mat a = random_matrix(4, 4);
    CHECK(devectorize(vectorize(a)).isApprox(a, 1e-15));

    Vec psi = random_matrix(3, 1), phi = random_matrix(3, 1);
    const Mat outer = psi * phi.adjoint();
    CHECK(devectorize(vectorize(outer), 3).isApprox(outer, 1e-15));
}

TEST_CASE("sandwich map reproduces A rho B") {
    // X Z X = -Z on a qubit
    const Vec vz = sandwich(pauli_x(), pauli_x()) * vectorize(pauli_z());
    CHECK((devectorize(vz, 2) + pauli_z()).norm() == doctest::Approx(0.0).epsilon(1e-14));

    const Mat a = random_matrix(3, 3), b = random_matrix(3, 3), rho = random_matrix(3, 3);
    const Mat direct = a * rho * b;
    const Mat via_superop = devectorize(sandwich(a, b) * vectorize(rho), 3);
    CHECK((direct - via_superop).norm() < 1e-12 * direct.norm());
}

TEST_CASE("Hilbert-Schmidt inner product and adjoint") {
    CHECK(hs_inner(identity(2), identity(2)).real() == doctest::Approx(2.0));

    // <A|O B> = <O^ddag A|B> against the explicit conjugate transpose
    const Mat a = random_matrix(3, 3), b = random_matrix(3, 3);
    const SuperOp o = sandwich(random_matrix(3, 3), random_matrix(3, 3));
    const cxd lhs = vectorize(a).dot(o * vectorize(b));
    const cxd rhs = Vec(superop_adjoint(o) * vectorize(a)).dot(vectorize(b));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));

    // adjoint of rho -> A rho B is A^dag rho B^dag
    const Mat a2 = random_matrix(3, 3), b2 = random_matrix(3, 3);
    CHECK((superop_adjoint(sandwich(a2, b2)) - sandwich(a2.adjoint(), b2.adjoint())).norm() <
          1e-12);
    CHECK((superop_adjoint(superop_adjoint(o)) - o).norm() == 0.0);
}

TEST_CASE("hermitian basis: qubit case is I,X,Y,Z over sqrt(2)") {
    const auto basis = hermitian_basis(2);
    REQUIRE(basis.size() == 4);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK((basis[0] - s * identity(2)).norm() < 1e-14);
    CHECK((basis[1] - s * pauli_x()).norm() < 1e-14);
    CHECK((basis[2] - s * pauli_y()).norm() < 1e-14);
    CHECK((basis[3] - s * pauli_z()).norm() < 1e-14);
}

TEST_CASE("hermitian basis orthonormality and real expansion coefficients") {
    for (Eigen::Index d : {2, 3, 5}) {
        const auto basis = hermitian_basis(d);
        REQUIRE(static_cast<Eigen::Index>(basis.size()) == d * d);
        for (size_t i = 0; i < basis.size(); ++i) {
            CHECK((basis[i] - Mat(basis[i].adjoint())).norm() < 1e-14);
            for (size_t j = 0; j < basis.size(); ++j) {
                const cxd g = hs_inner(basis[i], basis[j]);
                CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        }
        const Mat h = random_hermitian(d);
        for (const auto& g : basis) CHECK(std::abs(hs_inner(g, h).imag()) < 1e-12);
    }
}

TEST_CASE("partial trace of a product factors") {
    const Mat a = random_matrix(2, 2), b = random_matrix(3, 3);
    const Mat ab = tensor(a, b);
    const Mat tr_b = partial_trace(ab, {2, 3}, 1);
    CHECK((tr_b - b.trace() * a).norm() < 1e-12);
    const Mat tr_a = partial_trace(ab, {2, 3}, 0);
    CHECK((tr_a - a.trace() * b).norm() < 1e-12);

    // three factors, middle trace
    const Mat c = random_matrix(2, 2);
    const Mat abc = tensor(tensor(a, b), c);
    CHECK((partial_trace(abc, {2, 3, 2}, 1) - b.trace() * tensor(a, c)).norm() < 1e-12);
}

TEST_CASE("fock space operators") {
    FockSpace fock(10);
    for (Eigen::Index n = 0; n < 10; ++n)
        CHECK(fock.a(n, n + 1).real() == doctest::Approx(std::sqrt(double(n + 1))));
    CHECK((fock.n - Mat(fock.adag * fock.a)).norm() < 1e-14);
    // commutator holds away from the truncation edge
    const Mat comm = fock.a * fock.adag - fock.adag * fock.a;
    CHECK((comm.topLeftCorner(10, 10) - identity(10)).norm() < 1e-13);
}

TEST_CASE("coherent state truncation and tail mass") {
    const auto st = coherent_state(cxd(1.2, -0.4), 40);
    CHECK(st.amplitudes.norm() == doctest::Approx(1.0));
    CHECK(st.tail_mass < 1e-14);
    // <n> = |alpha|^2 after truncation
    FockSpace fock(40);
    const cxd mean = st.amplitudes.dot(fock.n * st.amplitudes);
    CHECK(mean.real() == doctest::Approx(std::norm(cxd(1.2, -0.4))).epsilon(1e-10));

    const auto tight = coherent_state(3.0, 6);
    CHECK(tight.tail_mass > 1e-3);  // deliberately insufficient truncation
}

TEST_CASE("mod projectors resolve the identity and shift under a") {
    const Eigen::Index n_max = 21;
    FockSpace fock(n_max);
    const Mat p0 = mod_projector(0, 2, n_max), p1 = mod_projector(1, 2, n_max);
    CHECK((p0 + p1 - identity(n_max + 1)).norm() == 0.0);
    // Pi_k a = a Pi_{k+1 mod d}
    for (Eigen::Index modulus : {2, 3}) {
        for (Eigen::Index k = 0; k < modulus; ++k) {
            const Mat lhs = mod_projector(k, modulus, n_max) * fock.a;
            const Mat rhs = fock.a * mod_projector((k + 1) % modulus, modulus, n_max);
            CHECK((lhs - rhs).norm() < 1e-13);
        }
    }
}

TEST_CASE("displacement moves the vacuum to a coherent state") {
    const cxd alpha(0.8, 0.3);
    const Mat d = displacement(alpha, 30);
    Vec vac = Vec::Zero(31);
    vac(0) = 1.0;
    const Vec disp = d * vac;
    CHECK((disp - coherent_state(alpha, 30).amplitudes).norm() < 1e-10);
}
