#pragma once

// Parametrized Lindbladian families: smooth steady-state basis fields,
// adiabatic connections and holonomies (coordinate and projector-product
// forms), curvature, the quantum geometric tensor, metrics and the leading
// non-adiabatic corrections.

#include "lindkit/perturbation.hpp"

#include <functional>

namespace lindkit {

using BasisField = std::function<std::vector<AsymptoticEntry>(const RVec&)>;

struct LindbladFamily {
    int param_dim = 1;
    std::function<LindbladSpec(const RVec&)> spec_at;
    // Optional analytic, gauge-fixed basis field.  When absent the numeric
    // sequential-projection gauge is used wherever a basis field is needed.
    BasisField basis_at;
    double rel_step = 1e-4;  // finite-difference step (relative)
    Tolerances tol;
};

struct PathSpec {
    std::vector<RVec> points;  // ordered samples x(s_i), s_i uniform in [0, 1]
    bool closed = false;

    void validate() const;
    /// Linear interpolation at s in [0, 1].
    RVec at(double s) const;
    /// Same path sampled with `factor` times as many segments.
    PathSpec refined(int factor) const;
};

/// Instantaneous biorthonormal basis: analytic field when available,
/// spectral pipeline otherwise.
std::vector<AsymptoticEntry> instantaneous_basis(const LindbladFamily& family, const RVec& x);

/// Support projector of the steady-state basis (the ul corner it generates).
Mat basis_support(const std::vector<AsymptoticEntry>& entries, double rank_tol = 1e-9);

/// Minimal projection P_Psi = sum |Psi><J_ul| built from a basis.
SuperOp minimal_projection(const std::vector<AsymptoticEntry>& entries);

/// Per-point bases along the path, gauge-aligned sequentially by projecting
/// the previous basis through the instantaneous asymptotic projection and
/// re-biorthogonalizing.  Throws on gap closure or near-singular overlap.
std::vector<std::vector<AsymptoticEntry>> smooth_basis_along_path(const LindbladFamily& family,
                                                                  const PathSpec& path);

/// Adiabatic connection A_alpha at x in the gauge of the given basis field,
/// by central differences (Richardson-refined when requested).
RMat adiabatic_connection(const BasisField& field, const RVec& x, int alpha, double h,
                          bool richardson = false);

/// Curvature F_ab = d_[a A_b] + [A_a, A_b] from a connection field gauge.
RMat curvature(const BasisField& field, const RVec& x, int a, int b, double h);

struct HolonomyResult {
    Mat b_coeff;        // coordinate form: action on the coefficient vector
    Mat u_coeff;        // projector-product (operator form) coefficient action
    int segments = 0;   // segments used at convergence
    double step_change = 0.0;  // ||B - B_prev|| at the last halving
    bool converged = false;
};

/// Holonomy of a (closed or open) path; segment count is doubled until the
/// coordinate form changes by less than `conv_tol` between refinements.
HolonomyResult holonomy(const LindbladFamily& family, const PathSpec& path,
                        double conv_tol = 1e-6, int max_refine = 8);

/// QGT at x: Q[(a,b)](mu,nu) = <<J_ul^mu| dP_a dP_b |Psi_nu>> with
/// dP_x = partial of the minimal projection; gauge enters only through the
/// basis at x itself.
Mat qgt(const LindbladFamily& family, const RVec& x, int a, int b, double h = -1.0);

struct MetricResult {
    RMat m;       // M_ab = sum_mu (Q_ab + Q_ba)_{mu mu}
    RMat m_alt;   // from the alternative tensor P^ddag dP^ddag dP P
};

MetricResult metrics(const LindbladFamily& family, const RVec& x, double h = -1.0,
                     Eigen::Index aux_dim = 1);

/// L = int sqrt(1/2 d_ax M^alt xdot xdot) ds along the path.
double path_length(const LindbladFamily& family, const PathSpec& path, Eigen::Index aux_dim,
                   double h = -1.0);

struct NonadiabaticResult {
    Vec leakage;     // (1/T) L_thu^-1 Pdot_Psi U |rho0>>
    Vec tunneling;   // (1/T) int U Pdot_inf L_thu^-1 Pdot_Psi U |rho0>>
    double leakage_norm = 0.0;
    double tunneling_norm = 0.0;
};

NonadiabaticResult nonadiabatic_corrections(const LindbladFamily& family, const PathSpec& path,
                                            double total_time, const Mat& rho0);

/// Reference integrator: RK4 for d rho/dt = L(t/T) rho along the path.
Mat evolve_along_path(const LindbladFamily& family, const PathSpec& path, double total_time,
                      const Mat& rho0, int steps);

}  // namespace lindkit
