#pragma once

#include <cstdint>

#include "covertcap/errors.hpp"

namespace covertcap {

/// Lossy thermal-noise bosonic channel: transmissivity eta in (0,1) and
/// environment mean photon number nbar_b >= 0 per mode.
struct ChannelParams {
    double eta;
    double nbar_b;

    ChannelParams(double eta_, double nbar_b_);
};

/// Covert transmission budget: at most nbar_s mean photons per mode over n
/// modes at covertness parameter delta.
struct CovertBudget {
    double delta;
    std::int64_t n;
    double nbar_s;
};

/// The closed-form constants of the two square-root scaling laws.
/// L-constants multiply the leading term, K-constants the second-order term.
struct CovertConstants {
    double c_cov;
    double c_rel_no_ea;  // bits
    double c_rel_ea;     // bits
    double l_no_ea;
    double k_no_ea;
    double l_ea;
    double k_ea;
};

/// Structured-receiver design parameter (v >= 1).
struct ReceiverParams {
    double v;

    explicit ReceiverParams(double v_);
};

/// Bosonic entropy function g(x) = (1+x) log2(1+x) - x log2(x), in bits.
/// g(0) = 0; monotone increasing.
double g_entropy(double x);

/// Covertness constant c_cov = sqrt(2 eta nbar_B (1 + eta nbar_B)) / (1 - eta).
/// Requires nbar_b > 0: with a noiseless environment nothing can be hidden.
double covert_constant(const ChannelParams& ch);

/// Per-mode photon budget nbar_s = sqrt(delta) c_cov / sqrt(n).
CovertBudget photon_budget(const ChannelParams& ch, double delta, std::int64_t n);

/// Holevo capacity g(eta nbar_s + (1-eta) nbar_B) - g((1-eta) nbar_B), bits/mode.
double holevo_capacity(const ChannelParams& ch, double nbar_s);

/// First-order Taylor upper bound eta nbar_s log2(1 + 1/((1-eta) nbar_B)).
/// Dominates holevo_capacity for all nbar_s >= 0.
double holevo_capacity_taylor_upper(const ChannelParams& ch, double nbar_s);

/// Entanglement-assisted capacity, bits/mode.
double ea_capacity(const ChannelParams& ch, double nbar_s);

/// Leading small-nbar_s expansion of ea_capacity. Valid for 0 < nbar_s < 1.
double ea_capacity_expansion(const ChannelParams& ch, double nbar_s);

/// Leading coefficients of the QPSK Holevo information and its variance at
/// small nbar_s: chi ~ nbar_s * c_rel_no_ea and
/// v_chi ~ nbar_s (1 + 2 nT) c_rel_no_ea log2(1 + 1/nT), nT = (1-eta) nbar_B.
struct QpskLeadingMoments {
    double chi;    // bits
    double v_chi;  // bits^2
};

QpskLeadingMoments qpsk_leading_moments(const ChannelParams& ch, double nbar_s);

/// Relative-entropy variance of the received Gaussian-modulated coherent
/// ensemble, bits^2. Evaluated at Bob's output: thermal occupation
/// nT = (1-eta) nbar_B and displacement photon parameter 2 eta nbar_s, which
/// makes the leading term coincide with the QPSK v_chi coefficient.
double gaussian_ensemble_variance(const ChannelParams& ch, double nbar_s);

/// Leading coefficient of gaussian_ensemble_variance per photon, bits^2.
/// Equals qpsk_vchi_leading_coefficient by construction.
double gaussian_ensemble_variance_leading(const ChannelParams& ch);

/// v_chi / nbar_s in the small-nbar_s limit, bits^2 per photon.
double qpsk_vchi_leading_coefficient(const ChannelParams& ch);

/// All scaling-law constants for a channel at covertness parameter delta.
CovertConstants covert_constants(const ChannelParams& ch, double delta);

/// Achievable rate of the sum-frequency-generation receiver design, bits/mode.
/// Requires nbar_s below the internal break-even scale w.
double structured_receiver_rate(const ChannelParams& ch, double nbar_s,
                                const ReceiverParams& rp);

/// Covert-capacity constant of the structured receiver,
/// eta gamma c_cov / (4 (1 + (1-eta) nbar_B)); approaches l_ea / 2 for
/// nbar_B >> 1.
double structured_receiver_covert_constant(const ChannelParams& ch);

}  // namespace covertcap
