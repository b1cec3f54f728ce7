#include "lindkit/models.hpp"

#include <algorithm>
#include <cmath>

namespace lindkit::models {

namespace {

Mat unit(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
    Mat e = Mat::Zero(d, d);
    e(i, j) = 1.0;
    return e;
}

double falling_factorial(double x, int m) {
    double v = 1.0;
    for (int k = 0; k < m; ++k) v *= x - k;
    return v;
}

}  // namespace

QubitDephasingModel qubit_dephasing(bool third_level) {
    QubitDephasingModel model;
    if (!third_level) {
        model.spec = jump_only(pauli_z());
        model.p = identity(2);
        for (int mu = 0; mu < 2; ++mu) {
            const Mat psi = unit(2, mu, mu);
            model.analytic.push_back({0.0, psi, psi});
        }
        return model;
    }
    Mat f = Mat::Zero(3, 3);
    f(0, 0) = 1.0;
    f(1, 1) = -1.0;
    f(2, 2) = 1.0;  // unitary on the extra level; F' handles its decay
    model.spec = make_spec(Mat::Zero(3, 3), {{f, 1.0}, {unit(3, 0, 2), 1.0}});
    model.p = Mat::Zero(3, 3);
    model.p(0, 0) = model.p(1, 1) = 1.0;
    model.analytic.push_back({0.0, unit(3, 0, 0), Mat(unit(3, 0, 0) + unit(3, 2, 2))});
    model.analytic.push_back({0.0, unit(3, 1, 1), unit(3, 1, 1)});
    return model;
}

TwoQubitModel two_qubit(TwoQubitVariant variant, double alpha, double beta, double gamma) {
    // Basis order: |psi_0>, |psi_1>, |psi_0 perp>, |psi_1 perp>.
    const Eigen::Index d = 4;
    TwoQubitModel model;
    model.variant = variant;
    model.alpha = alpha;
    model.beta = beta;
    model.gamma = gamma;

    Mat f_clean = unit(d, 0, 2) + unit(d, 1, 3);
    Mat h = Mat::Zero(d, d);
    Mat f = f_clean;
    switch (variant) {
        case TwoQubitVariant::Clean:
            break;
        case TwoQubitVariant::JumpDephased:
            f += alpha * (unit(d, 2, 2) - unit(d, 3, 3));
            break;
        case TwoQubitVariant::Compensated:
            h += 0.5 * alpha * (unit(d, 2, 2) - unit(d, 3, 3));
            [[fallthrough]];
        case TwoQubitVariant::HamSuppressed:
            h += 0.5 * beta * (unit(d, 0, 0) - unit(d, 1, 1));
            break;
        case TwoQubitVariant::Driven:
            f -= gamma * identity(d);
            break;
    }
    model.spec = make_spec(h, {{f, 1.0}});

    if (variant == TwoQubitVariant::Driven) {
        model.p = identity(d);
        const double norm2 = 1.0 + 4.0 * gamma * gamma + 2.0 * std::pow(gamma, 4);
        const double jfac = std::sqrt(norm2) / (1.0 + 2.0 * gamma * gamma);
        model.n_ax = jfac;
        model.rho_ax = Mat(2, 2);
        model.rho_ax << 1.0 + gamma * gamma, gamma, gamma, gamma * gamma;
        model.rho_ax /= 1.0 + 2.0 * gamma * gamma;
        for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) {
                Mat psi = (1.0 + gamma * gamma) * unit(d, k, l) + gamma * unit(d, k, l + 2) +
                          gamma * unit(d, k + 2, l) + gamma * gamma * unit(d, k + 2, l + 2);
                psi /= std::sqrt(norm2);
                const Mat j = jfac * (unit(d, k, l) + unit(d, k + 2, l + 2));
                model.analytic.push_back({0.0, psi, j});
            }
        return model;
    }

    model.p = Mat::Zero(d, d);
    model.p(0, 0) = model.p(1, 1) = 1.0;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            const Mat psi = unit(d, k, l);
            cxd suppression = 1.0;
            if (k != l) {
                // sign convention fixed by duality with Psi_kl; the adjoint
                // pair (l, k) carries the conjugate factor
                const double sign = k == 0 ? 1.0 : -1.0;
                switch (variant) {
                    case TwoQubitVariant::Clean:
                        break;
                    case TwoQubitVariant::JumpDephased:
                        suppression = 1.0 / (1.0 + 2.0 * alpha * alpha);
                        break;
                    case TwoQubitVariant::HamSuppressed:
                        suppression = 1.0 / (1.0 + I_UNIT * beta * sign);
                        break;
                    case TwoQubitVariant::Compensated:
                        suppression = 1.0 / (1.0 + I_UNIT * (beta - alpha) * sign);
                        break;
                    default:
                        break;
                }
            }
            const Mat j = unit(d, k, l) + suppression * unit(d, k + 2, l + 2);
            double delta = 0.0;
            if (variant == TwoQubitVariant::HamSuppressed ||
                variant == TwoQubitVariant::Compensated)
                delta = -0.5 * beta * (double(k == 0 ? 1 : -1) - double(l == 0 ? 1 : -1));
            model.analytic.push_back({delta, psi, j});
        }
    return model;
}

Mat DPhotonModel::analytic_psi(int k, int l) const { return unit(n_max + 1, k, l); }

Mat DPhotonModel::analytic_j(int k, int l) const {
    if (l < k) return analytic_j(l, k).adjoint();
    const Eigen::Index dim = n_max + 1;
    Mat j = Mat::Zero(dim, dim);
    const int m = l - k;
    const double root = std::sqrt(falling_factorial(double(l), m));
    double jprod = 1.0;
    for (Eigen::Index n = 0;; ++n) {
        const Eigen::Index row = d * n + k, col = d * n + l;
        if (col > n_max) break;
        // a^{l-k} matrix element between |row> and |col>
        double amp = 1.0;
        for (int t = 0; t < m; ++t) amp *= double(col - t);
        j(row, col) = jprod * std::sqrt(amp) / root;
        const double num = falling_factorial(double(d * n + l), m);
        const double den = num + falling_factorial(double(d * n + l + d), m);
        jprod *= 2.0 * num / den;
    }
    return j;
}

cxd DPhotonModel::c_coeff(int k, int l, cxd beta) const {
    if (l < k) return std::conj(c_coeff(l, k, beta));
    const int m = l - k;
    const double b2 = std::norm(beta);
    double jprod = 1.0;
    double sum = 0.0;
    for (Eigen::Index n = 0;; ++n) {
        const Eigen::Index idx = d * n + k;
        if (d * n + l > n_max) break;
        sum += jprod * std::exp(double(idx) * std::log(b2 > 0 ? b2 : 1e-300) -
                                std::lgamma(double(idx) + 1.0));
        const double num = falling_factorial(double(d * n + l), m);
        const double den = num + falling_factorial(double(d * n + l + d), m);
        jprod *= 2.0 * num / den;
    }
    return std::pow(std::conj(beta), m) * std::exp(-b2) * sum /
           std::sqrt(falling_factorial(double(l), m));
}

double DPhotonModel::c_diag(int k, cxd beta) const {
    const double b2 = std::norm(beta);
    cxd sum = 0.0;
    for (int l = 0; l < d; ++l) {
        const cxd phase = std::exp(I_UNIT * (2.0 * M_PI / d) * double(l));
        sum += std::exp(-I_UNIT * (2.0 * M_PI / d) * double(k * l)) * std::exp(b2 * (phase - 1.0));
    }
    return (sum / double(d)).real();
}

Mat DPhotonModel::steady_from_coherent_d2(cxd beta) const {
    require(d == 2, "steady_from_coherent_d2: only defined for d = 2");
    const double b2 = std::norm(beta);
    Mat rho(2, 2);
    rho(0, 0) = 0.5 * (1.0 + std::exp(-2.0 * b2));
    rho(1, 1) = 0.5 * (1.0 - std::exp(-2.0 * b2));
    rho(0, 1) = std::conj(beta) * std::exp(-b2) * bessel_i(0, b2);
    rho(1, 0) = std::conj(rho(0, 1));
    return rho;
}

DPhotonModel d_photon(int d, Eigen::Index n_max) {
    require(d >= 1, "d_photon: d must be >= 1");
    DPhotonModel model;
    model.d = d;
    model.n_max = n_max;
    FockSpace fock(n_max);
    Mat f = identity(n_max + 1);
    for (int k = 0; k < d; ++k) f = f * fock.a;
    model.spec = jump_only(f);
    for (int k = 0; k < d; ++k) model.projectors.push_back(mod_projector(k, d, n_max));
    return model;
}

Eigen::Index default_nmax(double alpha) {
    const double a2 = alpha * alpha;
    return static_cast<Eigen::Index>(std::ceil(4.0 * a2 + 10.0 * std::sqrt(a2 + 1.0) + 20.0));
}

Vec cat_state(int k, cxd alpha, int modulus, Eigen::Index n_max) {
    const TruncatedState coh = coherent_state(alpha, n_max);
    Vec v = Vec::Zero(n_max + 1);
    for (Eigen::Index n = k; n <= n_max; n += modulus) v(n) = coh.amplitudes(n);
    const double nrm = v.norm();
    if (nrm < 1e-154) {
        // degenerate only at alpha = 0 where the cat is a Fock state
        v.setZero();
        if (k <= n_max) v(k) = 1.0;
        return v;
    }
    return v / nrm;
}

double CatPumpModel::pi_k(int k) const {
    return 0.5 * (1.0 + (k % 2 == 0 ? 1.0 : -1.0) * std::exp(-2.0 * alpha * alpha));
}

double CatPumpModel::mean_occupation(int k) const {
    return alpha * alpha * pi_k(k + 1) / pi_k(k);
}

Mat CatPumpModel::j01() const { return cat_j01(alpha, n_max); }

Mat cat_j01q(int q, Eigen::Index n_max) {
    const Eigen::Index dim = n_max + 1;
    Mat j = Mat::Zero(dim, dim);
    if (q >= 0) {
        // (n-1)!! / (n+2q)!! Pi_0 a^{2q+1}: support {|2n><2n+2q+1|}
        for (Eigen::Index n = 0; 2 * n + 2 * q + 1 <= n_max; ++n) {
            const long long row = 2 * n, col = 2 * n + 2 * q + 1;
            const double logf = log_double_factorial(row - 1) - log_double_factorial(row + 2 * q);
            const double logamp = 0.5 * (std::lgamma(double(col) + 1.0) -
                                         std::lgamma(double(row) + 1.0));
            j(row, col) = std::exp(logf + logamp);
        }
    } else {
        // Pi_0 a^dag^{2|q|-1} n!! / (n+2|q|-1)!!: support {|2n+2|q|><2n+1|}
        const int aq = -q;
        for (Eigen::Index n = 0; 2 * n + 2 * aq <= n_max; ++n) {
            const long long row = 2 * n + 2 * aq, col = 2 * n + 1;
            const double logf = log_double_factorial(col) - log_double_factorial(col + 2 * aq - 1);
            const double logamp = 0.5 * (std::lgamma(double(row) + 1.0) -
                                         std::lgamma(double(col) + 1.0));
            j(row, col) = std::exp(logf + logamp);
        }
    }
    return j;
}

Mat cat_j01(cxd alpha, Eigen::Index n_max, double series_tol) {
    const Eigen::Index dim = n_max + 1;
    const cxd a2 = alpha * alpha;
    Mat j = Mat::Zero(dim, dim);
    const double scale0 = std::abs(bessel_i(0, a2));
    const int q_cap = static_cast<int>(std::abs(a2) + 12.0 * std::sqrt(std::abs(a2) + 1.0) + 12.0);
    for (int q = -q_cap; q <= q_cap; ++q) {
        if (2 * std::abs(q) + 1 > n_max) continue;
        const cxd a_q = (q % 2 == 0 ? 1.0 : -1.0) * bessel_i(q, a2) / double(2 * q + 1);
        if (std::abs(a_q) < series_tol * scale0) continue;
        j += a_q * cat_j01q(q, n_max);
    }
    // biorthonormalize against Psi01 = |0_alpha><1_alpha|
    const Vec c0 = cat_state(0, alpha, 2, n_max), c1 = cat_state(1, alpha, 2, n_max);
    const Mat psi01 = c0 * c1.adjoint();
    const cxd s = hs_inner(j, psi01);
    if (std::abs(s) < 1e-200) throw NumericalError("cat_j01: vanishing overlap with Psi01");
    return j / std::conj(s);
}

cxd CatPumpModel::c01_series(cxd beta) const {
    require(alpha > 0, "c01_series: needs alpha > 0");
    const double a2 = alpha * alpha;
    const double b2 = std::norm(beta);
    const double theta = std::arg(beta == 0.0 ? cxd(1.0) : beta);
    const int q_cap = static_cast<int>(std::max(a2, b2) + 12.0 * std::sqrt(std::max(a2, b2) + 1.0) + 12.0);
    cxd sum = 0.0;
    for (int q = -q_cap; q <= q_cap; ++q)
        sum += (q % 2 == 0 ? 1.0 : -1.0) / double(2 * q + 1) * bessel_i(q, a2) * bessel_i(q, b2) *
               std::exp(-2.0 * I_UNIT * double(q) * theta);
    return std::sqrt(2.0) * alpha * std::conj(beta) * std::exp(-b2) /
           std::sqrt(std::sinh(2.0 * a2)) * sum;
}

cxd CatPumpModel::c01_integral(cxd beta) const {
    require(alpha > 0, "c01_integral: needs alpha > 0");
    const double a2 = alpha * alpha;
    const cxd b2 = beta * beta;
    const cxd pref = I_UNIT * alpha * std::conj(beta) * std::exp(-std::norm(beta)) /
                     std::sqrt(2.0 * std::sinh(2.0 * a2));
    const double quad_tol = 1e-10 / std::max(std::abs(pref), 1e-300);
    const cxd integral = integrate(
        [&](double phi) {
            return std::exp(-I_UNIT * phi) *
                   bessel_i(0, std::abs(a2 - b2 * std::exp(2.0 * I_UNIT * phi)));
        },
        0.0, M_PI, quad_tol);
    return pref * integral;
}

double CatPumpModel::c_diag(int k, cxd beta) const {
    const double b2 = std::norm(beta);
    return 0.5 * (1.0 + (k % 2 == 0 ? 1.0 : -1.0) * std::exp(-2.0 * b2));
}

double CatPumpModel::c01_real_axis_limit(double alpha) {
    return 0.5 * std::erf(std::sqrt(2.0) * alpha) /
           std::sqrt(1.0 - std::exp(-4.0 * alpha * alpha));
}

cxd CatPumpModel::gate_element(int k, int l, double beta, double theta) const {
    if (((k + 1) % 2) != (l % 2)) return 0.0;
    // orientation fixed by the Fock limit <0|V|1> = -i beta e^{i theta};
    // the adjoint element carries the conjugate combination
    const double rk = pi_k(k), rk1 = pi_k(k + 1);
    return I_UNIT * alpha * beta *
           (std::sqrt(rk1 / rk) * std::exp(-I_UNIT * theta) -
            std::exp(I_UNIT * theta) * std::sqrt(rk / rk1));
}

double CatPumpModel::dephasing_zeno_rate(double kappa_noise) const {
    if (alpha == 0.0) return -0.5 * kappa_noise;
    const double a2 = alpha * alpha;
    return -kappa_noise * a2 / std::sinh(2.0 * a2);
}

double CatPumpModel::purity_from_coherent(cxd beta) const {
    const double c00 = c_diag(0, beta), c11 = c_diag(1, beta);
    const cxd c01 = c01_series(beta);
    return c00 * c00 + c11 * c11 + 2.0 * std::norm(c01);
}

CatPumpModel two_cat_pump(double alpha, Eigen::Index n_max, double kappa) {
    require(alpha >= 0.0, "two_cat_pump: alpha must be non-negative");
    CatPumpModel model;
    model.alpha = alpha;
    model.kappa = kappa;
    model.n_max = n_max < 0 ? default_nmax(alpha) : n_max;
    FockSpace fock(model.n_max);
    const Mat f = fock.a * fock.a - alpha * alpha * identity(model.n_max + 1);
    model.spec = make_spec(Mat::Zero(model.n_max + 1, model.n_max + 1), {{f, kappa}});
    model.cat0 = cat_state(0, alpha, 2, model.n_max);
    model.cat1 = cat_state(1, alpha, 2, model.n_max);
    model.p = model.cat0 * model.cat0.adjoint() + model.cat1 * model.cat1.adjoint();

    const Vec cats[2] = {model.cat0, model.cat1};
    for (int k = 0; k < 2; ++k)
        model.analytic.push_back(
            {0.0, Mat(cats[k] * cats[k].adjoint()), mod_projector(k, 2, model.n_max)});
    const Mat j01 = cat_j01(alpha, model.n_max);
    model.analytic.push_back({0.0, Mat(model.cat0 * model.cat1.adjoint()), j01});
    model.analytic.push_back({0.0, Mat(model.cat1 * model.cat0.adjoint()), Mat(j01.adjoint())});
    return model;
}

CatCodeModel cat_code(int d, double alpha, Eigen::Index n_max) {
    require(d >= 1, "cat_code: d must be >= 1");
    CatCodeModel model;
    model.d = d;
    model.alpha = alpha;
    model.n_max = n_max < 0 ? default_nmax(alpha) + 2 * d : n_max;
    FockSpace fock(model.n_max);
    Mat apow = identity(model.n_max + 1);
    for (int k = 0; k < 2 * d; ++k) apow = apow * fock.a;
    const Mat f = apow - std::pow(alpha, 2 * d) * identity(model.n_max + 1);
    model.spec = make_spec(Mat::Zero(model.n_max + 1, model.n_max + 1), {{f, 1.0}});
    model.p = Mat::Zero(model.n_max + 1, model.n_max + 1);
    for (int k = 0; k < 2 * d; ++k) {
        model.cats.push_back(cat_state(k, alpha, 2 * d, model.n_max));
        model.p += model.cats.back() * model.cats.back().adjoint();
    }
    return model;
}

LindbladSpec general_poly_jump(const std::vector<cxd>& roots, Eigen::Index n_max) {
    require(!roots.empty(), "general_poly_jump: need at least one root");
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j)
            require(std::abs(roots[i] - roots[j]) > 1e-12, "general_poly_jump: coincident roots");
    FockSpace fock(n_max);
    Mat f = identity(n_max + 1);
    for (const auto& r : roots) f = f * (fock.a - r * identity(n_max + 1));
    return jump_only(f);
}

PairCatModel pair_cat(int d, double gamma, int delta, Eigen::Index n_max) {
    require(d >= 1 && gamma > 0.0 && delta >= 0, "pair_cat: bad parameters");
    PairCatModel model;
    model.d = d;
    model.gamma = gamma;
    model.delta = delta;
    model.n_max = n_max;
    const Eigen::Index dim1 = n_max + 1, dim = dim1 * dim1;
    FockSpace fock(n_max);
    model.a = kron(fock.a, identity(dim1));
    model.b = kron(identity(dim1), fock.a);

    model.p_delta = Mat::Zero(dim, dim);
    for (Eigen::Index n = 0; n + delta <= n_max; ++n) {
        const Eigen::Index idx = n * dim1 + (n + delta);
        model.p_delta(idx, idx) = 1.0;
    }
    for (int k = 0; k < 4 * d; ++k) {
        Mat pk = Mat::Zero(dim, dim);
        for (Eigen::Index n1 = 0; n1 <= n_max; ++n1)
            for (Eigen::Index n2 = 0; n2 <= n_max; ++n2)
                if ((n1 + n2) % (4 * d) == k) pk(n1 * dim1 + n2, n1 * dim1 + n2) = 1.0;
        model.pi.push_back(std::move(pk));
    }

    const Mat ab = model.a * model.b;
    Mat abpow = identity(dim);
    for (int k = 0; k < 2 * d; ++k) abpow = abpow * ab;
    const Mat f = abpow - std::pow(gamma, 2 * d) * identity(dim);
    model.spec = make_spec(Mat::Zero(dim, dim), {{f, 1.0}});

    for (int k = 0; k < 2 * d; ++k) {
        Vec v = Vec::Zero(dim);
        for (Eigen::Index n = 0;; ++n) {
            const Eigen::Index lo = 2 * d * n + k;
            if (lo + delta > n_max) break;
            const double logc = (2.0 * d * n + k + 0.5 * delta) * std::log(gamma) -
                                0.5 * std::lgamma(double(lo) + 1.0) -
                                0.5 * std::lgamma(double(lo + delta) + 1.0);
            v(lo * dim1 + lo + delta) = std::exp(logc);
        }
        const double nrm = v.norm();
        require(nrm > 0, "pair_cat: truncation leaves an empty code state");
        model.code_states.push_back(v / nrm);
    }
    return model;
}

MModeCatModel m_mode_cat(int modes, int d, double gamma, Eigen::Index n_max) {
    require(modes >= 2 && d >= 1 && gamma > 0.0, "m_mode_cat: bad parameters");
    MModeCatModel model;
    model.modes = modes;
    model.d = d;
    model.gamma = gamma;
    model.n_max = n_max;
    const Eigen::Index dim1 = n_max + 1;
    Eigen::Index dim = 1;
    for (int m = 0; m < modes; ++m) dim *= dim1;
    FockSpace fock(n_max);
    for (int m = 0; m < modes; ++m) {
        Mat op = identity(1);
        for (int j = 0; j < modes; ++j) op = kron(op, j == m ? fock.a : identity(dim1));
        model.lowering.push_back(op);
    }
    Mat prod = identity(dim);
    for (const auto& op : model.lowering) prod = prod * op;
    Mat ppow = identity(dim);
    for (int k = 0; k < 2 * d; ++k) ppow = ppow * prod;
    const Mat f = ppow - std::pow(gamma, 2 * d * modes) * identity(dim);
    model.spec = make_spec(Mat::Zero(dim, dim), {{f, 1.0}});

    for (int k = 0; k < 2 * d; ++k) {
        Vec v = Vec::Zero(dim);
        for (Eigen::Index n = 0;; ++n) {
            const Eigen::Index occ = 2 * d * n + k;
            if (occ > n_max) break;
            const double logc = double(modes) * (double(occ) * std::log(gamma) -
                                                 0.5 * std::lgamma(double(occ) + 1.0));
            Eigen::Index idx = 0;
            for (int m = 0; m < modes; ++m) idx = idx * dim1 + occ;
            v(idx) = std::exp(logc);
        }
        const double nrm = v.norm();
        require(nrm > 0, "m_mode_cat: truncation leaves an empty code state");
        model.code_states.push_back(v / nrm);
    }
    return model;
}

FrustrationFreeModel frustration_free_jumps(const std::vector<Mat>& h_terms, bool ladder,
                                            double kernel_tol) {
    require(!h_terms.empty(), "frustration_free_jumps: empty Hamiltonian list");
    const Eigen::Index dim = h_terms.front().rows();
    FrustrationFreeModel model;
    std::vector<Jump> jumps;
    Mat h_sum = Mat::Zero(dim, dim);

    for (const auto& h : h_terms) {
        require(h.rows() == dim && h.cols() == dim, "frustration_free_jumps: dim mismatch");
        h_sum += h;
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const double emax = std::max(es.eigenvalues().maxCoeff(), 1.0);
        require(es.eigenvalues().minCoeff() > -kernel_tol * emax,
                "frustration_free_jumps: term is not positive semidefinite");
        std::vector<Eigen::Index> ker, ran;
        for (Eigen::Index k = 0; k < dim; ++k)
            (es.eigenvalues()(k) < kernel_tol * emax ? ker : ran).push_back(k);
        require(!ker.empty(), "frustration_free_jumps: empty kernel");
        const auto dker = static_cast<Eigen::Index>(ker.size());
        const auto dran = static_cast<Eigen::Index>(ran.size());

        Mat pker = Mat::Zero(dim, dim);
        for (auto k : ker) pker += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
        model.kernel_projectors.push_back(pker);
        if (dran == 0) continue;

        if (!ladder) {
            // isometries from range slices onto the kernel, eq-shaped ones on a diagonal
            const Eigen::Index n_jumps = (dran + dker - 1) / dker;
            for (Eigen::Index l = 0; l < n_jumps; ++l) {
                Mat f = Mat::Zero(dim, dim);
                for (Eigen::Index j = 0; j < dker && l * dker + j < dran; ++j)
                    f += es.eigenvectors().col(ker[static_cast<size_t>(j)]) *
                         es.eigenvectors().col(ran[static_cast<size_t>(l * dker + j)]).adjoint();
                jumps.push_back({f, 1.0});
            }
        } else {
            // one ladder jump: slice p decays into slice p-1, slice 0 = kernel
            Mat f = Mat::Zero(dim, dim);
            std::vector<std::vector<Eigen::Index>> slices{ker};
            for (Eigen::Index start = 0; start < dran; start += dker) {
                std::vector<Eigen::Index> s;
                for (Eigen::Index j = start; j < std::min(start + dker, dran); ++j)
                    s.push_back(ran[static_cast<size_t>(j)]);
                slices.push_back(std::move(s));
            }
            for (size_t p = 1; p < slices.size(); ++p)
                for (size_t j = 0; j < slices[p].size(); ++j)
                    f += es.eigenvectors().col(slices[p - 1][j % slices[p - 1].size()]) *
                         es.eigenvectors().col(slices[p][j]).adjoint();
            jumps.push_back({f, 1.0});
        }
    }
    model.spec = make_spec(Mat::Zero(dim, dim), std::move(jumps));

    Eigen::SelfAdjointEigenSolver<Mat> es(h_sum);
    const double emax = std::max(es.eigenvalues().maxCoeff(), 1.0);
    model.joint_kernel_projector = Mat::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        if (es.eigenvalues()(k) < kernel_tol * emax)
            model.joint_kernel_projector +=
                es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    return model;
}

std::vector<std::string> catalog_names() {
    return {"qubit_dephasing",        "two_qubit:clean",      "two_qubit:jump-dephased",
            "two_qubit:ham-suppressed", "two_qubit:compensated", "two_qubit:driven",
            "d_photon",               "two_cat_pump",         "cat_code",
            "poly_jump",              "pair_cat",             "m_mode_cat",
            "frustration_free_demo"};
}

BuiltModel build_catalog(const std::string& name, std::map<std::string, double> params) {
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    BuiltModel built;
    built.name = name;
    built.params = params;

    if (name == "qubit_dephasing") {
        auto m = qubit_dephasing(get("third_level", 0.0) != 0.0);
        built.spec = m.spec;
        built.p = m.p;
    } else if (name.rfind("two_qubit:", 0) == 0) {
        const std::string variant = name.substr(10);
        TwoQubitModel m;
        if (variant == "clean")
            m = two_qubit(TwoQubitVariant::Clean);
        else if (variant == "jump-dephased")
            m = two_qubit(TwoQubitVariant::JumpDephased, get("alpha", 1.0));
        else if (variant == "ham-suppressed")
            m = two_qubit(TwoQubitVariant::HamSuppressed, 0.0, get("beta", 1.0));
        else if (variant == "compensated")
            m = two_qubit(TwoQubitVariant::Compensated, get("alpha", 1.0),
                          get("beta", get("alpha", 1.0)));
        else if (variant == "driven")
            m = two_qubit(TwoQubitVariant::Driven, 0.0, 0.0, get("gamma", 0.5));
        else
            throw std::invalid_argument("unknown two_qubit variant: " + variant);
        built.spec = m.spec;
        built.p = m.p;
    } else if (name == "d_photon") {
        auto m = d_photon(static_cast<int>(get("d", 2)),
                          static_cast<Eigen::Index>(get("nmax", 20)));
        built.spec = m.spec;
    } else if (name == "two_cat_pump") {
        auto m = two_cat_pump(get("alpha", 1.0), static_cast<Eigen::Index>(get("nmax", -1)),
                              get("kappa", 1.0));
        built.spec = m.spec;
        built.p = m.p;
    } else if (name == "cat_code") {
        auto m = cat_code(static_cast<int>(get("d", 2)), get("alpha", 1.0),
                          static_cast<Eigen::Index>(get("nmax", -1)));
        built.spec = m.spec;
        built.p = m.p;
    } else if (name == "poly_jump") {
        std::vector<cxd> roots;
        for (int k = 0;; ++k) {
            const std::string re = "root" + std::to_string(k) + "_re";
            const std::string im = "root" + std::to_string(k) + "_im";
            if (params.find(re) == params.end()) break;
            roots.emplace_back(get(re, 0.0), get(im, 0.0));
        }
        if (roots.empty()) roots = {cxd(1.0, 0.0), cxd(-1.0, 0.0)};
        built.spec = general_poly_jump(roots, static_cast<Eigen::Index>(get("nmax", 20)));
    } else if (name == "pair_cat") {
        auto m = pair_cat(static_cast<int>(get("d", 1)), get("gamma", 0.6),
                          static_cast<int>(get("delta", 0)),
                          static_cast<Eigen::Index>(get("nmax", 5)));
        built.spec = m.spec;
    } else if (name == "m_mode_cat") {
        auto m = m_mode_cat(static_cast<int>(get("modes", 3)), static_cast<int>(get("d", 1)),
                            get("gamma", 0.5), static_cast<Eigen::Index>(get("nmax", 3)));
        built.spec = m.spec;
    } else if (name == "frustration_free_demo") {
        // two qubits, one projector Hamiltonian with ground state |00>
        Mat h = identity(4) - unit(4, 0, 0);
        auto m = frustration_free_jumps({h}, get("ladder", 0.0) != 0.0);
        built.spec = m.spec;
        built.p = m.joint_kernel_projector;
    } else {
        throw std::invalid_argument("unknown catalog model: " + name);
    }
    return built;
}

}  // namespace lindkit::models
