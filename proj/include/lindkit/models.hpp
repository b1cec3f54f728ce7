#pragma once

// Model catalog: constructors and closed-form reference data for the worked
// examples, used as golden oracles for the generic machinery and as the CLI's
// named models.

#include "lindkit/asymptotics.hpp"
#include "lindkit/special.hpp"

#include <map>
#include <string>

namespace lindkit::models {

struct QubitDephasingModel {
    LindbladSpec spec;
    Mat p;
    std::vector<AsymptoticEntry> analytic;  // Psi_mu = |mu><mu|, J = Psi (+ catch term)
};

/// One qubit with jump Z (Poisson semigroup); with `third_level` an extra
/// state |2> decays into |0> through F' = |0><2|.
QubitDephasingModel qubit_dephasing(bool third_level = false);

enum class TwoQubitVariant { Clean, JumpDephased, HamSuppressed, Compensated, Driven };

struct TwoQubitModel {
    TwoQubitVariant variant;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    LindbladSpec spec;
    Mat p;                                  // DFS/NS projector (identity when driven)
    std::vector<AsymptoticEntry> analytic;  // closed-form (Psi, J) pairs
    Mat rho_ax;                             // driven case only
    double n_ax = 1.0;                      // driven case only
};

/// Bell-state stabilization on two qubits; the basis order is
/// (psi0, psi1, psi0_perp, psi1_perp) with psi_k = (|01> +- |10>)/sqrt(2).
TwoQubitModel two_qubit(TwoQubitVariant variant, double alpha = 0.0, double beta = 0.0,
                        double gamma = 0.0);

struct DPhotonModel {
    int d = 2;
    Eigen::Index n_max = 0;
    LindbladSpec spec;  // F = a^d, kappa = 1
    std::vector<Mat> projectors;  // Pi_k, k = 0..d-1

    Mat analytic_j(int k, int l) const;   // conserved quantity J_kl
    Mat analytic_psi(int k, int l) const; // |k><l|
    cxd c_coeff(int k, int l, cxd beta) const;  // footprint of a coherent state
    double c_diag(int k, cxd beta) const;       // closed form for c_kk
    Mat steady_from_coherent_d2(cxd beta) const;  // I0 closed form, d = 2 only
};

DPhotonModel d_photon(int d, Eigen::Index n_max);

/// Default truncation heuristic for cat-type models.
Eigen::Index default_nmax(double alpha);

/// Normalized projected coherent state Pi_k |alpha> for residue k mod `modulus`.
Vec cat_state(int k, cxd alpha, int modulus, Eigen::Index n_max);

struct CatPumpModel {
    double alpha = 1.0;
    double kappa = 1.0;
    Eigen::Index n_max = 0;
    LindbladSpec spec;  // F = a^2 - alpha^2
    Mat p;              // cat-state projector
    Vec cat0, cat1;
    std::vector<AsymptoticEntry> analytic;  // Psi_kl and J^kk = Pi_k, J^01 Bessel series

    double pi_k(int k) const;          // <alpha|Pi_k|alpha>
    double mean_occupation(int k) const;  // alpha^2 pi_{k+1}/pi_k
    Mat j01() const;
    cxd c01_series(cxd beta) const;
    cxd c01_integral(cxd beta) const;
    double c_diag(int k, cxd beta) const;
    static double c01_real_axis_limit(double alpha);
    cxd gate_element(int k, int l, double beta, double theta) const;
    double dephasing_zeno_rate(double kappa_noise) const;  // -k a^2 / sinh(2 a^2)
    double purity_from_coherent(cxd beta) const;
};

CatPumpModel two_cat_pump(double alpha, Eigen::Index n_max = -1, double kappa = 1.0);

/// J^{01,q} ladder family of the two-cat pump; q may be negative.
Mat cat_j01q(int q, Eigen::Index n_max);
/// Bessel-series conserved quantity for jump a^2 - alpha^2, alpha complex;
/// normalized against Psi01 = |0_alpha><1_alpha|.
Mat cat_j01(cxd alpha, Eigen::Index n_max, double series_tol = 1e-14);

struct CatCodeModel {
    int d = 2;          // tracks up to d-1 loss events; 2d cat states
    double alpha = 1.0;
    Eigen::Index n_max = 0;
    LindbladSpec spec;  // F = a^{2d} - alpha^{2d}
    Mat p;
    std::vector<Vec> cats;  // |k_alpha>, k = 0..2d-1
};

CatCodeModel cat_code(int d, double alpha, Eigen::Index n_max = -1);

/// F = prod_k (a - alpha_k); roots must be distinct.
LindbladSpec general_poly_jump(const std::vector<cxd>& roots, Eigen::Index n_max);

struct PairCatModel {
    int d = 1;
    double gamma = 0.5;  // eigenvalue of ab on the code states
    int delta = 0;       // occupation-number difference
    Eigen::Index n_max = 0;  // per mode
    LindbladSpec spec;       // F = (ab)^{2d} - gamma^{2d}
    Mat a, b;                // mode lowering operators on the two-mode space
    Mat p_delta;             // fixed-difference projector
    std::vector<Mat> pi;     // total-number projectors mod 4d
    std::vector<Vec> code_states;  // |k_{gamma,delta}>, k = 0..2d-1

    Mat pi_k(int k) const { return pi[static_cast<size_t>(((k % (4 * d)) + 4 * d) % (4 * d))]; }
};

PairCatModel pair_cat(int d, double gamma, int delta, Eigen::Index n_max);

struct MModeCatModel {
    int modes = 3;
    int d = 1;
    double gamma = 0.5;  // per-mode coherent amplitude
    Eigen::Index n_max = 0;
    LindbladSpec spec;  // F = (prod_m a_m)^2 - gamma^{2M} for d = 1
    std::vector<Mat> lowering;
    std::vector<Vec> code_states;  // permutation-symmetric, k = 0..1
};

MModeCatModel m_mode_cat(int modes, int d, double gamma, Eigen::Index n_max);

struct FrustrationFreeModel {
    LindbladSpec spec;
    std::vector<Mat> kernel_projectors;  // per input term
    Mat joint_kernel_projector;
};

/// Jumps that stabilize the joint ground-state subspace of a frustration-free
/// Hamiltonian sum;  `ladder` picks the single-jump ladder variant.
FrustrationFreeModel frustration_free_jumps(const std::vector<Mat>& h_terms,
                                            bool ladder = false, double kernel_tol = 1e-9);

// --- catalog plumbing for the CLI -----------------------------------------

struct BuiltModel {
    std::string name;
    LindbladSpec spec;
    Mat p;  // empty when not analytically known
    std::map<std::string, double> params;
};

std::vector<std::string> catalog_names();
BuiltModel build_catalog(const std::string& name, std::map<std::string, double> params);

}  // namespace lindkit::models
