#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "covertcap/scalar_capacity.hpp"

namespace covertcap {

/// Two-mode Gaussian state: 4x4 covariance matrix in qqpp ordering
/// (vacuum variance 1/2) plus quadrature mean vector.
/// Construction validates symmetry and the bona fide condition
/// (symplectic eigenvalues >= 1/2 - 1e-9).
struct TwoModeCM {
    Eigen::Matrix4d sigma;
    Eigen::Vector4d mean;

    explicit TwoModeCM(const Eigen::Matrix4d& sigma_,
                       const Eigen::Vector4d& mean_ = Eigen::Vector4d::Zero());
};

/// Symplectic spectrum of a block-structured two-mode CM: eigenvalues
/// (lambda1, lambda2) and the symplectic eigenvector matrix S with
/// S (D + D) S^T reconstructing the CM and S Omega S^T = Omega.
struct SymplecticSpectrum {
    double lambda1;
    double lambda2;
    Eigen::Matrix4d s_matrix;
};

/// Gibbs matrix G of a Gaussian state: log-density kernel,
/// G = -2 Omega S [arccoth(2D)]^{+2} S^T Omega.
struct GibbsMatrix {
    Eigen::Matrix4d g;
};

/// Symplectic form in qqpp ordering: [[0, I], [-I, 0]].
Eigen::Matrix4d omega_qqpp();

/// arccoth(x) = (1/2) ln((x+1)/(x-1)); requires x > 1 + 1e-12.
double arccoth(double x);

/// Symplectic eigenvalues of a general 4x4 CM via the eigenproblem of
/// Omega * Sigma. Numeric fallback path used for validation; the
/// closed-form route is symplectic_spectrum.
std::array<double, 2> numeric_symplectic_eigenvalues(const Eigen::Matrix4d& sigma);

/// Two-mode squeezed vacuum CM with mean photon number nbar_s per mode.
TwoModeCM tmsv_cm(double nbar_s);

/// Thermal-loss channel on mode 1: X Sigma X^T + Y with
/// X = diag(sqrt(eta),1,sqrt(eta),1), Y = diag((1-eta)(nbar_B+1/2),0,...).
TwoModeCM thermal_loss_apply(const TwoModeCM& cm, const ChannelParams& ch);

/// Channel output CM (TMSV through the thermal-loss channel) and the
/// decorrelated thermal-product reference with identical diagonals.
std::pair<TwoModeCM, TwoModeCM> output_and_reference_cms(const ChannelParams& ch,
                                                         double nbar_s);

/// Closed-form symplectic spectrum for CMs with the two-mode block structure
/// (equal qq/pp diagonals, correlations only at the (1,2) positions with
/// opposite signs between blocks). Rejects other structures.
SymplecticSpectrum symplectic_spectrum(const TwoModeCM& cm);

/// Gibbs matrix of a mixed two-mode state. Rejects symplectic eigenvalues
/// within 1e-9 of the pure-state boundary 1/2.
GibbsMatrix gibbs_matrix(const TwoModeCM& cm);

/// Gibbs matrix of a single-mode thermal state with quadrature variance v.
Eigen::Matrix2d single_mode_gibbs(double v);

/// Relative-entropy variance V(rho||sigma) between Gaussian states, bits^2:
/// (1/2) Tr[(Delta Sigma_rho)^2] + (1/8) Tr[(Delta Omega)^2]
///   + delta^T G_sigma Sigma_rho G_sigma delta, Delta = G_rho - G_sigma.
double qre_variance_gaussian(const TwoModeCM& rho, const TwoModeCM& sigma);

/// Nine-term closed form of the relative-entropy variance between the
/// channel output state and its thermal-product reference, bits^2.
double ea_variance_closed(const ChannelParams& ch, double nbar_s);

/// Small-nbar_s expansion of ea_variance_closed (five terms), bits^2.
/// Valid for 0 < nbar_s < 1.
double ea_variance_expansion(const ChannelParams& ch, double nbar_s);

/// Leading term of ea_variance_expansion alone, bits^2.
double ea_variance_expansion_dominant(double nbar_s);

/// Phase rotation by angle phi applied to mode 2 of a CM.
TwoModeCM phase_rotate_mode2(const TwoModeCM& cm, double phi);

}  // namespace covertcap
