#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>

#include "covertcap/scalar_capacity.hpp"

namespace covertcap {

/// Operator on a truncated Fock space (levels 0..dim-1 per factor; two-mode
/// operators have dim = K*K). Density operators record the truncated
/// probability mass in trace_deficit.
struct FockOperator {
    int dim = 0;
    Eigen::MatrixXcd matrix;
    double trace_deficit = 0.0;
};

/// Single-mode channel as a dim^2 x dim^2 real matrix acting on vectorized
/// operators (row-major index m*dim + n). column_trace_deficit[n] records the
/// trace lost by the basis input |n><n|; env_tail the truncated environment
/// weight.
struct ChannelSuperop {
    int dim = 0;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd column_trace_deficit;
    double env_tail = 0.0;
};

/// First four absolute central moments of the log-likelihood operator
/// between two states, in bits^k.
struct RelEntMoments {
    double d = 0.0;  // bits
    double v = 0.0;  // bits^2
    double t = 0.0;  // bits^3
    double q = 0.0;  // bits^4

    /// Jensen / Cauchy-Schwarz consistency: T^2 <= V*Q and V^2 <= Q within
    /// the given slack, D and V nonnegative up to rounding.
    bool satisfies_inequalities(double slack = 1e-8) const;
};

/// Smallest K with thermal tail (nbar/(1+nbar))^K below tail_bound.
int thermal_truncation_dim(double nbar, double tail_bound = 1e-12);

/// Thermal state, diagonal with entries nbar^k/(1+nbar)^(k+1).
FockOperator thermal_fock(double nbar, int dim);

/// Displacement unitary exp(alpha a^dag - conj(alpha) a), built in an
/// enlarged space and cut back to dim. Requires |alpha|^2 <= dim/4.
FockOperator displacement_operator(std::complex<double> alpha, int dim);

/// D(alpha) rho_th(nbar) D(alpha)^dag.
FockOperator displaced_thermal_fock(std::complex<double> alpha, double nbar, int dim);

/// Beamsplitter-with-thermal-environment channel as a superoperator.
/// k_env bounds the environment photon sum.
ChannelSuperop thermal_channel_superop(const ChannelParams& ch, int dim, int k_env);

/// Cached superoperator with k_env chosen from the environment tail bound.
std::shared_ptr<const ChannelSuperop> shared_superop(const ChannelParams& ch, int dim);

/// Apply a single-mode channel. Throws TruncationError when the weighted
/// trace leakage on this input exceeds leakage_bound.
FockOperator apply_channel(const ChannelSuperop& sop, const FockOperator& rho,
                           double leakage_bound = 1e-8);

/// Apply a single-mode channel to the first factor of a two-mode operator.
FockOperator apply_channel_first(const ChannelSuperop& sop, const FockOperator& rho_two,
                                 double leakage_bound = 1e-8);

/// Two-mode squeezed vacuum as a rank-1 density operator on dim^2 levels.
FockOperator tmsv_fock(double nbar_s, int dim);

/// TMSV with the first mode sent through the channel.
FockOperator ea_output_state_fock(const ChannelParams& ch, double nbar_s, int dim);

/// Partial traces of a two-mode operator with per-factor dimension dim.
FockOperator trace_out_first(const FockOperator& rho_two, int dim);
FockOperator trace_out_second(const FockOperator& rho_two, int dim);

FockOperator tensor(const FockOperator& a, const FockOperator& b);

/// Choi matrix of a superoperator (reshuffled), for positivity checks.
Eigen::MatrixXd choi_matrix(const ChannelSuperop& sop);

/// Von Neumann entropy in bits; eigenvalues below 1e-16 are excluded.
double von_neumann_entropy(const FockOperator& rho);

/// D, V, T, Q between two density operators via eigendecompositions.
RelEntMoments rel_ent_moments(const FockOperator& rho, const FockOperator& sigma);

struct QpskEnsembleMoments {
    double chi;    // bits
    double v_chi;  // bits^2
};

/// Holevo information and its variance for the received QPSK ensemble
/// (four thermal states displaced by sqrt(eta nbar_s) {1,i,-1,-i}).
QpskEnsembleMoments qpsk_ensemble_moments(const ChannelParams& ch, double nbar_s, int dim);

/// Same ensemble as an explicit classical-quantum pair (4-dim index register),
/// giving all four moments.
RelEntMoments qpsk_joint_moments(const ChannelParams& ch, double nbar_s, int dim);

/// Result of an adaptive truncation loop: accepted K satisfies
/// |value(K) - value(K+step)| < tol componentwise.
struct AdaptiveMoments {
    RelEntMoments moments;
    int dim_used = 0;
};

AdaptiveMoments ea_moments_adaptive(const ChannelParams& ch, double nbar_s,
                                    double tol = 1e-8, int step = 4);
AdaptiveMoments qpsk_joint_moments_adaptive(const ChannelParams& ch, double nbar_s,
                                            double tol = 1e-8, int step = 4);

}  // namespace covertcap
