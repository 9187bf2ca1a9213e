#include "covertcap/finite_blocklength.hpp"

#include <array>
#include <cmath>
#include <string>

#include "covertcap/fock.hpp"
#include "covertcap/symplectic.hpp"

namespace covertcap {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

// Acklam's rational approximation to the normal quantile, central + tails.
double inv_normal_initial(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

}  // namespace

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double inv_gaussian_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("inv_gaussian_cdf: p must lie strictly in (0,1)");
    }
    // Evaluate on the lower half and mirror; keeps antisymmetry exact.
    if (p > 0.5) return -inv_gaussian_cdf(1.0 - p);
    double x = inv_normal_initial(p);
    for (int i = 0; i < 2; ++i) {
        x -= (gaussian_cdf(x) - p) / normal_pdf(x);
    }
    return x;
}

MBound lemma1_bound(const BoundInputs& b) {
    if (!(b.epsilon > 0.0 && b.epsilon < 1.0)) {
        throw std::domain_error("lemma1_bound: epsilon must lie strictly in (0,1)");
    }
    if (b.n < 1) throw std::domain_error("lemma1_bound: n must be >= 1");
    if (b.v < 0.0 || b.q < 0.0) {
        throw std::domain_error("lemma1_bound: V and Q must be nonnegative");
    }
    const double nd = static_cast<double>(b.n);
    double phi_term = 0.0;
    double c_n = std::log2(4.0 * b.epsilon * nd);
    if (b.v > 0.0) {
        phi_term = std::sqrt(nd * b.v) * inv_gaussian_cdf(b.epsilon);
        c_n += (kBerryEsseen / kSqrt2Pi) * std::pow(b.q, 0.75) / b.v + std::sqrt(b.v) / kSqrt2Pi;
    } else if (b.epsilon != 0.5 || b.q != 0.0) {
        throw DegenerateVarianceError("lemma1_bound: V = 0 requires epsilon = 1/2 and Q = 0");
    }
    MBound out;
    out.terms.first_order = nd * b.d;
    out.terms.second_order = phi_term;
    out.terms.remainder = -c_n;
    out.m_lower = out.terms.first_order + out.terms.second_order + out.terms.remainder;
    return out;
}

QCalibration calibrate_q(const ChannelParams& ch) {
    static const std::array<double, 3> kFitPoints = {1e-3, 3.1622776601683794e-3, 1e-2};
    double num0 = 0.0, den0 = 0.0, num1 = 0.0, den1 = 0.0;
    for (double ns : kFitPoints) {
        const double q_qpsk = qpsk_joint_moments_adaptive(ch, ns).moments.q;
        num0 += q_qpsk * ns;
        den0 += ns * ns;
        const double q_ea = ea_moments_adaptive(ch, ns).moments.q;
        const double ln4 = std::pow(std::log(ns), 4);
        num1 += q_ea * ns * ln4;
        den1 += ns * ns * ln4 * ln4;
    }
    return QCalibration{num0 / den0, num1 / den1};
}

MBound m_bound_no_ea(const ChannelParams& ch, double delta, double epsilon, std::int64_t n,
                     const QCalibration& calib) {
    const CovertBudget budget = photon_budget(ch, delta, n);
    const QpskLeadingMoments lead = qpsk_leading_moments(ch, budget.nbar_s);
    const MBound raw = lemma1_bound(
        BoundInputs{lead.chi, lead.v_chi, calib.q0 * budget.nbar_s, epsilon, n});

    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double c_cov = covert_constant(ch);
    const double c_rel = ch.eta * std::log2(1.0 + 1.0 / nt);
    const double sdn = std::sqrt(delta * static_cast<double>(n));
    MBound out;
    out.terms.first_order = c_cov * c_rel * sdn;
    out.terms.second_order = std::sqrt(c_cov * std::sqrt(delta) * (1.0 + 2.0 * nt)) * c_rel *
                             inv_gaussian_cdf(epsilon) *
                             std::pow(static_cast<double>(n), 0.25);
    out.terms.remainder = raw.m_lower - out.terms.first_order - out.terms.second_order;
    out.m_lower = out.terms.first_order + out.terms.second_order + out.terms.remainder;
    return out;
}

MBound m_bound_ea(const ChannelParams& ch, double delta, double epsilon, std::int64_t n,
                  const QCalibration& calib) {
    const CovertBudget budget = photon_budget(ch, delta, n);
    const double d = ea_capacity(ch, budget.nbar_s);
    const double v = ea_variance_closed(ch, budget.nbar_s);
    const double ln_ns = std::log(budget.nbar_s);
    const double q_model = calib.q1 * budget.nbar_s * ln_ns * ln_ns * ln_ns * ln_ns;
    const MBound raw = lemma1_bound(BoundInputs{d, v, q_model, epsilon, n});

    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double c_cov = covert_constant(ch);
    const double c_rel = ch.eta / (2.0 * (1.0 + nt));
    const double nd = static_cast<double>(n);
    const double log2n = std::log2(nd);
    MBound out;
    out.terms.first_order = c_cov * c_rel * std::sqrt(delta * nd) * log2n;
    out.terms.second_order = std::sqrt(c_cov * std::sqrt(delta) * c_rel) *
                             inv_gaussian_cdf(epsilon) * std::pow(nd, 0.25) * log2n;
    out.terms.remainder = raw.m_lower - out.terms.first_order - out.terms.second_order;
    out.m_lower = out.terms.first_order + out.terms.second_order + out.terms.remainder;
    return out;
}

}  // namespace covertcap
