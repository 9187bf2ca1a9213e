#pragma once

#include <cstdint>

#include "covertcap/scalar_capacity.hpp"

namespace covertcap {

/// Upper end of the known Berry-Esseen constant range; keeps the message-size
/// bound a valid lower bound.
inline constexpr double kBerryEsseen = 0.4784;

/// Per-use moments feeding the generic message-size bound.
struct BoundInputs {
    double d;        // bits/use
    double v;        // bits^2/use
    double q;        // bits^4/use
    double epsilon;  // in (0,1)
    std::int64_t n;
};

struct MBoundTerms {
    double first_order;
    double second_order;
    double remainder;
};

/// Lower bound on the message size in bits. m_lower is exactly the sum of
/// the three recorded terms; it may be negative for small n.
struct MBound {
    double m_lower;
    MBoundTerms terms;
};

/// Standard normal CDF via erfc.
double gaussian_cdf(double x);

/// Inverse standard normal CDF; |Phi(result) - p| <= 1e-10.
/// Negative for p < 1/2, antisymmetric about 1/2.
double inv_gaussian_cdf(double p);

/// Generic second-order bound:
/// m = n D + sqrt(n V) InvPhi(eps) - C_n,
/// C_n = (C_BE/sqrt(2pi)) Q^{3/4}/V + sqrt(V)/sqrt(2pi) + log2(4 eps n).
MBound lemma1_bound(const BoundInputs& b);

/// Fourth-moment model constants fitted from the Fock oracle:
/// Q ~ q0 nbar_s (QPSK) and Q ~ q1 nbar_s ln^4(nbar_s) (TMSV scheme), bits^4.
struct QCalibration {
    double q0;
    double q1;
};

/// Fit q0, q1 for a channel at nbar_s in {1e-3, 1e-2.5, 1e-2}
/// (least squares through the origin).
QCalibration calibrate_q(const ChannelParams& ch);

/// Message-size lower bound for the QPSK scheme under the covertness budget.
/// Term record: L_noEA sqrt(delta n), K_noEA InvPhi(eps) n^{1/4}, remainder.
MBound m_bound_no_ea(const ChannelParams& ch, double delta, double epsilon, std::int64_t n,
                     const QCalibration& calib);

/// Message-size lower bound for the entanglement-assisted scheme.
/// Term record: L_EA sqrt(delta n) log2 n, K_EA InvPhi(eps) n^{1/4} log2 n,
/// remainder.
MBound m_bound_ea(const ChannelParams& ch, double delta, double epsilon, std::int64_t n,
                  const QCalibration& calib);

}  // namespace covertcap
