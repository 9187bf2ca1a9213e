#include "covertcap/scalar_capacity.hpp"

#include <cmath>
#include <string>

namespace covertcap {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kGSeriesSwitch = 1e-12;
constexpr double kEigClampTol = 1e-14;

double log2_safe(double x) { return std::log2(x); }

}  // namespace

ChannelParams::ChannelParams(double eta_, double nbar_b_) : eta(eta_), nbar_b(nbar_b_) {
    if (!(eta > 0.0) || !(eta < 1.0)) {
        throw std::invalid_argument("ChannelParams: eta must lie strictly in (0,1), got " +
                                    std::to_string(eta_));
    }
    if (!(nbar_b >= 0.0)) {
        throw std::invalid_argument("ChannelParams: nbar_b must be >= 0, got " +
                                    std::to_string(nbar_b_));
    }
}

ReceiverParams::ReceiverParams(double v_) : v(v_) {
    if (!(v >= 1.0)) {
        throw std::invalid_argument("ReceiverParams: v must be >= 1, got " + std::to_string(v_));
    }
}

double g_entropy(double x) {
    if (!(x >= 0.0)) {
        throw std::domain_error("g_entropy: negative argument " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    if (x < kGSeriesSwitch) {
        // x log2(1/x) + x/ln2; avoids cancellation in (1+x)log2(1+x)
        return x * log2_safe(1.0 / x) + x / kLn2;
    }
    return x * log2_safe(1.0 + 1.0 / x) + std::log2(1.0 + x);
}

double covert_constant(const ChannelParams& ch) {
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("covert_constant: covertness impossible with nbar_b = 0");
    }
    const double en = ch.eta * ch.nbar_b;
    return std::sqrt(2.0 * en * (1.0 + en)) / (1.0 - ch.eta);
}

CovertBudget photon_budget(const ChannelParams& ch, double delta, std::int64_t n) {
    if (!(delta > 0.0)) {
        throw std::domain_error("photon_budget: delta must be > 0, got " + std::to_string(delta));
    }
    if (n < 1) {
        throw std::domain_error("photon_budget: n must be >= 1, got " + std::to_string(n));
    }
    const double nbar_s =
        std::sqrt(delta) * covert_constant(ch) / std::sqrt(static_cast<double>(n));
    return CovertBudget{delta, n, nbar_s};
}

double holevo_capacity(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s >= 0.0)) {
        throw std::domain_error("holevo_capacity: nbar_s must be >= 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    return g_entropy(ch.eta * nbar_s + nt) - g_entropy(nt);
}

double holevo_capacity_taylor_upper(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s >= 0.0)) {
        throw std::domain_error("holevo_capacity_taylor_upper: nbar_s must be >= 0");
    }
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("holevo_capacity_taylor_upper: bound diverges at nbar_b = 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    return ch.eta * nbar_s * std::log2(1.0 + 1.0 / nt);
}

double ea_capacity(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s >= 0.0)) {
        throw std::domain_error("ea_capacity: nbar_s must be >= 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double sum = nbar_s + 1.0 + ch.eta * nbar_s + nt;
    const double b = std::sqrt(sum * sum - 4.0 * ch.eta * nbar_s * (nbar_s + 1.0));
    double a_plus = 0.5 * (b - 1.0 + (1.0 - ch.eta) * (ch.nbar_b - nbar_s));
    double a_minus = 0.5 * (b - 1.0 - (1.0 - ch.eta) * (ch.nbar_b - nbar_s));
    for (double* a : {&a_plus, &a_minus}) {
        if (*a < 0.0) {
            if (*a < -kEigClampTol) {
                throw ConsistencyError("ea_capacity: symplectic offset below -1e-14: " +
                                       std::to_string(*a));
            }
            *a = 0.0;
        }
    }
    return g_entropy(nbar_s) + g_entropy(ch.eta * nbar_s + nt) - g_entropy(a_plus) -
           g_entropy(a_minus);
}

double ea_capacity_expansion(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s > 0.0 && nbar_s < 1.0)) {
        throw ExpansionDomainError("ea_capacity_expansion: requires 0 < nbar_s < 1");
    }
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("ea_capacity_expansion: requires nbar_b > 0");
    }
    const double s0 = 1.0 + (1.0 - ch.eta) * ch.nbar_b;
    const double lead = -ch.eta * nbar_s * std::log2(nbar_s) / s0;
    const double corr =
        nbar_s * (1.0 / kLn2 + (ch.eta / s0) * std::log2(1.0 - 1.0 / s0));
    return lead - corr;
}

QpskLeadingMoments qpsk_leading_moments(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s >= 0.0)) {
        throw std::domain_error("qpsk_leading_moments: nbar_s must be >= 0");
    }
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("qpsk_leading_moments: logarithm diverges at nbar_b = 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double log_term = std::log2(1.0 + 1.0 / nt);
    const double c_rel = ch.eta * log_term;
    return QpskLeadingMoments{nbar_s * c_rel, nbar_s * (1.0 + 2.0 * nt) * c_rel * log_term};
}

double qpsk_vchi_leading_coefficient(const ChannelParams& ch) {
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("qpsk_vchi_leading_coefficient: requires nbar_b > 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double log_term = std::log2(1.0 + 1.0 / nt);
    return (1.0 + 2.0 * nt) * ch.eta * log_term * log_term;
}

double gaussian_ensemble_variance(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s >= 0.0)) {
        throw std::domain_error("gaussian_ensemble_variance: nbar_s must be >= 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    if (nt <= 0.0) {
        throw CovertnessError("gaussian_ensemble_variance: logarithm diverges at nbar_b = 0");
    }
    // Received ensemble: displacement photons 2 eta nbar_s on top of thermal nT.
    const double m = 2.0 * ch.eta * nbar_s;
    const double gb = std::log2((nt + 1.0) / nt);
    const double ge = std::log2((nt + m + 1.0) / (nt + m));
    const double tt = nt * (nt + 1.0);
    return tt * gb * gb - 2.0 * tt * gb * ge + tt * ge * ge + m * (nt + 0.5) * ge * ge +
           m * m * ge * ge;
}

double gaussian_ensemble_variance_leading(const ChannelParams& ch) {
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    if (nt <= 0.0) {
        throw CovertnessError("gaussian_ensemble_variance_leading: requires nbar_b > 0");
    }
    const double gb = std::log2((nt + 1.0) / nt);
    return 2.0 * ch.eta * (nt + 0.5) * gb * gb;
}

CovertConstants covert_constants(const ChannelParams& ch, double delta) {
    if (!(delta > 0.0)) {
        throw std::domain_error("covert_constants: delta must be > 0");
    }
    const double c_cov = covert_constant(ch);
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double c_rel_no_ea = ch.eta * std::log2(1.0 + 1.0 / nt);
    const double c_rel_ea = ch.eta / (2.0 * (1.0 + nt));
    const double sd = std::sqrt(delta);
    CovertConstants k;
    k.c_cov = c_cov;
    k.c_rel_no_ea = c_rel_no_ea;
    k.c_rel_ea = c_rel_ea;
    k.l_no_ea = c_cov * c_rel_no_ea;
    k.l_ea = c_cov * c_rel_ea;
    k.k_no_ea = std::sqrt(c_cov * sd * (1.0 + 2.0 * nt)) * c_rel_no_ea;
    k.k_ea = std::sqrt(c_cov * sd * c_rel_ea);
    return k;
}

double structured_receiver_rate(const ChannelParams& ch, double nbar_s,
                                const ReceiverParams& rp) {
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("structured_receiver_rate: requires nbar_b > 0");
    }
    if (!(nbar_s > 0.0)) {
        throw std::domain_error("structured_receiver_rate: nbar_s must be > 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double s0 = 1.0 + nt;
    const double gamma = 1.0 - std::exp(-2.0 * s0);
    const double w = 4.0 * s0 / (rp.v * ch.eta * gamma + 4.0 * nt * s0);
    if (nbar_s >= w) {
        throw ExpansionDomainError("structured_receiver_rate: nbar_s >= w, rate formula invalid");
    }
    const double prefactor = ch.eta * nbar_s * gamma / (2.0 * s0);
    const double bracket = std::log2(w / nbar_s) - std::log2(std::log(w / nbar_s) + 1.0) -
                           g_entropy(2.0 * nt * s0 / (rp.v * ch.eta * gamma));
    return prefactor * bracket;
}

double structured_receiver_covert_constant(const ChannelParams& ch) {
    const double c_cov = covert_constant(ch);
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double s0 = 1.0 + nt;
    const double gamma = 1.0 - std::exp(-2.0 * s0);
    return ch.eta * gamma * c_cov / (4.0 * s0);
}

}  // namespace covertcap
