#include "covertcap/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covertcap {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kSymmetryTol = 1e-12;
constexpr double kBonaFideTol = 1e-9;
constexpr double kStructureTol = 1e-10;
constexpr double kPureTol = 1e-9;
constexpr double kArccothGuard = 1e-12;

struct BlockEntries {
    double w11;
    double w12;
    double w22;
};

// Extract (w11, w12, w22) from a CM with the supported block pattern:
// qq block [[w11,w12],[w12,w22]], pp block [[w11,-w12],[-w12,w22]], no qp
// correlations.
BlockEntries block_entries(const Eigen::Matrix4d& s) {
    const double w11 = s(0, 0);
    const double w22 = s(1, 1);
    const double w12 = s(0, 1);
    const Eigen::Matrix4d expect = (Eigen::Matrix4d() << w11, w12, 0, 0,  //
                                    w12, w22, 0, 0,                       //
                                    0, 0, w11, -w12,                      //
                                    0, 0, -w12, w22)
                                       .finished();
    if ((s - expect).cwiseAbs().maxCoeff() > kStructureTol) {
        throw StructureError("symplectic_spectrum: CM lacks the supported two-mode block form");
    }
    return BlockEntries{w11, w12, w22};
}

}  // namespace

Eigen::Matrix4d omega_qqpp() {
    Eigen::Matrix4d om = Eigen::Matrix4d::Zero();
    om(0, 2) = 1.0;
    om(1, 3) = 1.0;
    om(2, 0) = -1.0;
    om(3, 1) = -1.0;
    return om;
}

double arccoth(double x) {
    if (!(x > 1.0 + kArccothGuard)) {
        throw SingularStateError("arccoth: argument must exceed 1 + 1e-12, got " +
                                 std::to_string(x));
    }
    return 0.5 * std::log((x + 1.0) / (x - 1.0));
}

std::array<double, 2> numeric_symplectic_eigenvalues(const Eigen::Matrix4d& sigma) {
    // Eigenvalues of Omega*Sigma come in pairs +-i*lambda.
    Eigen::EigenSolver<Eigen::Matrix4d> es(omega_qqpp() * sigma, false);
    std::array<double, 4> mags{};
    for (int i = 0; i < 4; ++i) mags[static_cast<size_t>(i)] = std::abs(es.eigenvalues()(i).imag());
    std::sort(mags.begin(), mags.end());
    // pairs (mags[0],mags[1]) and (mags[2],mags[3]) are degenerate
    return {0.5 * (mags[0] + mags[1]), 0.5 * (mags[2] + mags[3])};
}

TwoModeCM::TwoModeCM(const Eigen::Matrix4d& sigma_, const Eigen::Vector4d& mean_)
    : sigma(sigma_), mean(mean_) {
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
        throw StructureError("TwoModeCM: matrix not symmetric within 1e-12");
    }
    const auto lam = numeric_symplectic_eigenvalues(sigma);
    if (lam[0] < 0.5 - kBonaFideTol) {
        throw NonPhysicalError("TwoModeCM: symplectic eigenvalue " + std::to_string(lam[0]) +
                               " below the bona fide bound 1/2");
    }
}

TwoModeCM tmsv_cm(double nbar_s) {
    if (!(nbar_s >= 0.0)) {
        throw std::domain_error("tmsv_cm: nbar_s must be >= 0");
    }
    const double d = nbar_s + 0.5;
    const double c = std::sqrt(nbar_s * (nbar_s + 1.0));
    Eigen::Matrix4d s;
    s << d, c, 0, 0,  //
        c, d, 0, 0,   //
        0, 0, d, -c,  //
        0, 0, -c, d;
    return TwoModeCM(s);
}

TwoModeCM thermal_loss_apply(const TwoModeCM& cm, const ChannelParams& ch) {
    const double r = std::sqrt(ch.eta);
    const double y = (1.0 - ch.eta) * (ch.nbar_b + 0.5);
    Eigen::Vector4d xdiag(r, 1.0, r, 1.0);
    Eigen::Vector4d ydiag(y, 0.0, y, 0.0);
    const Eigen::Matrix4d out =
        xdiag.asDiagonal() * cm.sigma * xdiag.asDiagonal() +
        Eigen::Matrix4d(ydiag.asDiagonal());
    return TwoModeCM(out, xdiag.cwiseProduct(cm.mean));
}

std::pair<TwoModeCM, TwoModeCM> output_and_reference_cms(const ChannelParams& ch,
                                                         double nbar_s) {
    TwoModeCM rho = thermal_loss_apply(tmsv_cm(nbar_s), ch);
    Eigen::Matrix4d ref = rho.sigma;
    ref(0, 1) = ref(1, 0) = 0.0;
    ref(2, 3) = ref(3, 2) = 0.0;
    return {rho, TwoModeCM(ref, rho.mean)};
}

SymplecticSpectrum symplectic_spectrum(const TwoModeCM& cm) {
    const BlockEntries w = block_entries(cm.sigma);
    const double tr = w.w11 + w.w22;
    if (tr <= 2.0 * std::abs(w.w12)) {
        throw NonPhysicalError("symplectic_spectrum: w11 + w22 <= 2|w12|, not a state");
    }
    const double root = std::sqrt(tr * tr - 4.0 * w.w12 * w.w12);
    SymplecticSpectrum out;
    out.lambda1 = 0.5 * (root + (w.w11 - w.w22));
    out.lambda2 = 0.5 * (root - (w.w11 - w.w22));
    const double ww = std::sqrt(w.w11 - 2.0 * w.w12 + w.w22) / std::sqrt(root);
    const double sp = 0.5 * (ww + 1.0 / ww);
    const double sm = 0.5 * (ww - 1.0 / ww);
    out.s_matrix << sp, sm, 0, 0,  //
        -sm, -sp, 0, 0,            //
        0, 0, sp, -sm,             //
        0, 0, sm, -sp;
    return out;
}

GibbsMatrix gibbs_matrix(const TwoModeCM& cm) {
    const SymplecticSpectrum sp = symplectic_spectrum(cm);
    for (double lam : {sp.lambda1, sp.lambda2}) {
        if (lam <= 0.5 + kPureTol) {
            throw SingularStateError(
                "gibbs_matrix: symplectic eigenvalue at the pure-state boundary: " +
                std::to_string(lam));
        }
    }
    const double a1 = arccoth(2.0 * sp.lambda1);
    const double a2 = arccoth(2.0 * sp.lambda2);
    const Eigen::Vector4d diag(a1, a2, a1, a2);
    const Eigen::Matrix4d om = omega_qqpp();
    GibbsMatrix g;
    g.g = -2.0 * om * sp.s_matrix * diag.asDiagonal() * sp.s_matrix.transpose() * om;
    return g;
}

Eigen::Matrix2d single_mode_gibbs(double v) {
    if (v <= 0.5 + kPureTol) {
        throw SingularStateError("single_mode_gibbs: variance at the pure-state boundary");
    }
    return 2.0 * arccoth(2.0 * v) * Eigen::Matrix2d::Identity();
}

double qre_variance_gaussian(const TwoModeCM& rho, const TwoModeCM& sigma) {
    const Eigen::Matrix4d g_rho = gibbs_matrix(rho).g;
    const Eigen::Matrix4d g_sig = gibbs_matrix(sigma).g;
    const Eigen::Matrix4d delta = g_rho - g_sig;
    const Eigen::Matrix4d om = omega_qqpp();
    const Eigen::Matrix4d ds = delta * rho.sigma;
    const Eigen::Matrix4d dw = delta * om;
    const Eigen::Vector4d dm = rho.mean - sigma.mean;
    const double v_nats = 0.5 * (ds * ds).trace() + 0.125 * (dw * dw).trace() +
                          dm.dot(g_sig * rho.sigma * g_sig * dm);
    return v_nats / (kLn2 * kLn2);
}

double ea_variance_closed(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s > 0.0)) {
        throw std::domain_error("ea_variance_closed: nbar_s must be > 0");
    }
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("ea_variance_closed: requires nbar_b > 0");
    }
    const double w11 = (ch.nbar_b + 0.5) * (1.0 - ch.eta) + (nbar_s + 0.5) * ch.eta;
    const double w12 = std::sqrt(ch.eta * nbar_s * (nbar_s + 1.0));
    const double w22 = nbar_s + 0.5;
    const double tr = w11 + w22;
    const double root = std::sqrt(tr * tr - 4.0 * w12 * w12);
    const double l1 = 0.5 * (root + (w11 - w22));
    const double l2 = 0.5 * (root - (w11 - w22));

    const double c11 = arccoth(2.0 * w11);
    const double c22 = arccoth(2.0 * w22);
    const double cl1 = arccoth(2.0 * l1);
    const double cl2 = arccoth(2.0 * l2);

    const auto coeff_a = [&](double a, double b, double c) {
        return 1.0 - 4.0 * (a * a - b * b) +
               (a + c - 4.0 * a * (a * a - 3.0 * b * b) - 4.0 * c * (a * a + b * b)) / root;
    };
    const double a_fwd = coeff_a(w11, w12, w22);
    const double a_swp = coeff_a(w22, w12, w11);

    const double r1 = (4.0 * w11 * w11 - 1.0) * c11 * c11;
    const double r2 = (4.0 * w22 * w22 - 1.0) * c22 * c22;
    const double r3 =
        (2.0 * w11 * w11 + 2.0 * (w11 - w22) * root - 4.0 * w12 * w12 + 2.0 * w22 * w22 - 1.0) *
        cl1 * cl1;
    const double r4 =
        (2.0 * w11 * w11 - 2.0 * (w11 - w22) * root - 4.0 * w12 * w12 + 2.0 * w22 * w22 - 1.0) *
        cl2 * cl2;
    const double r5 = 8.0 * w12 * w12 * c11 * c22;
    const double r6 = a_fwd * c11 * cl1;
    const double r7 = (a_fwd - 2.0 + 8.0 * w11 * w11 - 8.0 * w12 * w12) * c11 * cl2;
    const double r8 = (a_swp - 2.0 + 8.0 * w22 * w22 - 8.0 * w12 * w12) * c22 * cl1;
    const double r9 = a_swp * c22 * cl2;

    const double v_nats = r1 + r2 + r3 + r4 + r5 + r6 + r7 + r8 + r9;
    return v_nats / (kLn2 * kLn2);
}

double ea_variance_expansion(const ChannelParams& ch, double nbar_s) {
    if (!(nbar_s > 0.0 && nbar_s < 1.0)) {
        throw ExpansionDomainError("ea_variance_expansion: requires 0 < nbar_s < 1");
    }
    if (ch.nbar_b <= 0.0) {
        throw CovertnessError("ea_variance_expansion: requires nbar_b > 0");
    }
    const double nt = (1.0 - ch.eta) * ch.nbar_b;
    const double s0 = nt + 1.0;
    const double wq = (1.0 - ch.eta) * (ch.nbar_b + 1.0);
    const double gt = std::log(s0 / nt);
    const double lx = std::log(nbar_s);
    const double lw = std::log(wq * nbar_s / s0);
    const double x = nbar_s;
    const double v_nats = x * lx * lx                        //
                          + (ch.eta / s0) * x * gt * gt      //
                          - (2.0 * ch.eta / s0) * x * lx * gt  //
                          - (2.0 * wq / s0) * x * lx * lw    //
                          + (wq / s0) * x * lw * lw;
    return v_nats / (kLn2 * kLn2);
}

double ea_variance_expansion_dominant(double nbar_s) {
    const double lx = std::log(nbar_s);
    return nbar_s * lx * lx / (kLn2 * kLn2);
}

TwoModeCM phase_rotate_mode2(const TwoModeCM& cm, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
    rot(1, 1) = c;
    rot(1, 3) = s;
    rot(3, 1) = -s;
    rot(3, 3) = c;
    return TwoModeCM(rot * cm.sigma * rot.transpose(), rot * cm.mean);
}

}  // namespace covertcap
