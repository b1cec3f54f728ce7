#pragma once

// Shared helpers for the unit tests: deterministic random matrices and a few
// canonical instances.

#include "lindkit/lindblad.hpp"

#include <random>

namespace lindkit::testing {

inline std::mt19937& rng() {
    static std::mt19937 gen(20240811u);
    return gen;
}

inline Mat random_matrix(Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cxd(dist(rng()), dist(rng()));
    return m;
}

inline Mat random_hermitian(Eigen::Index dim) {
    const Mat m = random_matrix(dim, dim);
    return 0.5 * (m + Mat(m.adjoint()));
}

inline Mat random_density(Eigen::Index dim) {
    const Mat m = random_matrix(dim, dim);
    Mat rho = m * m.adjoint();
    return rho / rho.trace();
}

inline LindbladSpec random_lindblad(Eigen::Index dim, int n_jumps = 2) {
    std::vector<Jump> jumps;
    for (int k = 0; k < n_jumps; ++k) jumps.push_back({random_matrix(dim, dim), 0.4 + 0.3 * k});
    return make_spec(random_hermitian(dim), std::move(jumps));
}

}  // namespace lindkit::testing
