#include "ellspin/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ellspin {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

Torus Torus::rectangular(double length, double alpha) {
    if (!(length > 0.0)) throw Error("torus: real period must be positive");
    if (!(alpha > 0.0)) throw Error("torus: alpha must be positive");
    return Torus{cplx(length, 0.0), cplx(0.0, alpha)};
}

EllipticContext::EllipticContext(double period_length, double alpha,
                                 EllipticMode mode)
    : torus_(Torus::rectangular(period_length, alpha)) {
    nome_direct_ = std::exp(-pi * alpha / period_length);
    switch (mode) {
        case EllipticMode::automatic:
            swapped_ = nome_direct_ > swap_threshold;
            break;
        case EllipticMode::direct:
            swapped_ = false;
            break;
        case EllipticMode::swapped:
            swapped_ = true;
            break;
    }
    if (!swapped_) {
        frame_w1_ = torus_.omega1;
        frame_w2_ = torus_.omega2;
        nome_frame_ = nome_direct_;
    } else {
        // Same lattice, orientation-preserving basis.
        frame_w1_ = torus_.omega2;
        frame_w2_ = -torus_.omega1;
        nome_frame_ = std::exp(-pi * period_length / alpha);
    }

    // Smallest k with q^{k^2} < 1e-16, capped at 64.  Inside the reduced
    // cell every dropped term is below ~2 q^{k^2 - 1/4}; the (2n+1)^3
    // factor of the third-derivative series is folded into the bound so
    // the eta constants keep the same tail budget.
    int k = 2;
    while (k < 64 &&
           std::pow(2.0 * k + 1.0, 3.0) *
                   std::pow(nome_frame_, double(k) * double(k) - 0.25) >=
               1e-17)
        ++k;
    truncation_ = k;

    coeff_.resize(static_cast<size_t>(truncation_) + 1);
    double lq = std::log(nome_frame_);
    for (size_t n = 0; n < coeff_.size(); ++n) {
        double e = (double(n) + 0.5) * (double(n) + 0.5) * lq;
        double a = std::exp(e);
        coeff_[n] = (n % 2 == 0) ? a : -a;
    }

    // theta_1'(0) and theta_1'''(0) give zeta at half the frame period.
    double d1 = 0.0, d3 = 0.0;
    for (size_t n = 0; n < coeff_.size(); ++n) {
        double f = 2.0 * double(n) + 1.0;
        d1 += coeff_[n] * f;
        d3 += coeff_[n] * f * f * f;
    }
    theta1p0_ = 2.0 * d1;
    eta_frame_ = -(pi * pi) * (-2.0 * d3) / (6.0 * frame_w1_ * (2.0 * d1));

    if (!swapped_) {
        eta1_ = eta_frame_;
        eta2_ = zeta_raw(torus_.omega2 / 2.0);
    } else {
        eta2_ = eta_frame_;
        eta1_ = zeta_raw(torus_.omega1 / 2.0);
    }
}

void EllipticContext::theta1(cplx v, int nder, cplx out[4]) const {
    const cplx s1 = std::sin(v), c1 = std::cos(v);
    const cplx s2 = 2.0 * s1 * c1, c2 = c1 * c1 - s1 * s1;
    cplx sn = s1, cn = c1;
    cplx t0 = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
    for (size_t n = 0; n < coeff_.size(); ++n) {
        const double a = coeff_[n];
        const double f = 2.0 * double(n) + 1.0;
        t0 += a * sn;
        if (nder >= 1) t1 += a * f * cn;
        if (nder >= 2) t2 += a * f * f * sn;
        if (nder >= 3) t3 += a * f * f * f * cn;
        const cplx snext = sn * c2 + cn * s2;
        const cplx cnext = cn * c2 - sn * s2;
        sn = snext;
        cn = cnext;
    }
    out[0] = 2.0 * t0;
    out[1] = 2.0 * t1;
    out[2] = -2.0 * t2;
    out[3] = -2.0 * t3;
}

EllipticContext::Reduced EllipticContext::reduce(cplx z) const {
    const double L = torus_.length(), a = torus_.alpha();
    const long m = std::lround(z.real() / L);
    const long n = std::lround(z.imag() / a);
    return Reduced{z - cplx(double(m) * L, double(n) * a), m, n};
}

double EllipticContext::lattice_distance(cplx z) const {
    return std::abs(reduce(z).z0);
}

void EllipticContext::guard(const Reduced& r, const char* who) const {
    if (std::abs(r.z0) < pole_guard) {
        std::ostringstream os;
        os << who << ": argument within " << pole_guard
           << " of a lattice point (distance " << std::abs(r.z0) << ")";
        throw PoleProximity(os.str());
    }
}

cplx EllipticContext::zeta_raw(cplx z) const {
    cplx th[4];
    theta1(pi * z / frame_w1_, 1, th);
    return 2.0 * eta_frame_ * z / frame_w1_ + (pi / frame_w1_) * th[1] / th[0];
}

cplx EllipticContext::sigma_raw(cplx z) const {
    cplx th[4];
    theta1(pi * z / frame_w1_, 0, th);
    return (frame_w1_ / pi) * std::exp(eta_frame_ * z * z / frame_w1_) *
           th[0] / theta1p0_;
}

cplx EllipticContext::wp(cplx z) const {
    const Reduced r = reduce(z);
    guard(r, "wp");
    cplx th[4];
    theta1(pi * r.z0 / frame_w1_, 2, th);
    const cplx lder = th[1] / th[0];
    const cplx scale = pi / frame_w1_;
    return -2.0 * eta_frame_ / frame_w1_ -
           scale * scale * (th[2] / th[0] - lder * lder);
}

cplx EllipticContext::wzeta(cplx z) const {
    const Reduced r = reduce(z);
    guard(r, "wzeta");
    return zeta_raw(r.z0) + 2.0 * double(r.m) * eta1_ +
           2.0 * double(r.n) * eta2_;
}

cplx EllipticContext::wsigma(cplx z) const {
    const Reduced r = reduce(z);
    const cplx omega = cplx(double(r.m) * torus_.length(),
                            double(r.n) * torus_.alpha());
    const double sign = ((r.m + r.n + r.m * r.n) % 2 != 0) ? -1.0 : 1.0;
    const cplx eta_omega =
        2.0 * double(r.m) * eta1_ + 2.0 * double(r.n) * eta2_;
    return sign * std::exp(eta_omega * (r.z0 + omega / 2.0)) * sigma_raw(r.z0);
}

cplx EllipticContext::wsigma_log(cplx z) const {
    const Reduced r = reduce(z);
    const cplx omega = cplx(double(r.m) * torus_.length(),
                            double(r.n) * torus_.alpha());
    const cplx eta_omega =
        2.0 * double(r.m) * eta1_ + 2.0 * double(r.n) * eta2_;
    cplx th[4];
    theta1(pi * r.z0 / frame_w1_, 0, th);
    cplx log_sigma = std::log(frame_w1_ / pi) +
                     eta_frame_ * r.z0 * r.z0 / frame_w1_ +
                     std::log(th[0] / theta1p0_) +
                     eta_omega * (r.z0 + omega / 2.0);
    if ((r.m + r.n + r.m * r.n) % 2 != 0) log_sigma += cplx(0.0, pi);
    return log_sigma;
}

// --- free functions ------------------------------------------------------

cplx wp(cplx z, const EllipticContext& ctx) { return ctx.wp(z); }
cplx wzeta(cplx z, const EllipticContext& ctx) { return ctx.wzeta(z); }
cplx wsigma(cplx z, const EllipticContext& ctx) { return ctx.wsigma(z); }

double h_exchange(int j, const EllipticContext& ctx_N) {
    const double N = ctx_N.period();
    const long Ni = std::lround(N);
    long jm = j % Ni;
    if (jm < 0) jm += Ni;
    if (jm == 0)
        throw InvalidSite("h_exchange: site offset is 0 mod N");

    const cplx omega = ctx_N.torus().omega2;
    const cplx pref = (omega / pi) * std::sin(pi / omega);
    const cplx bracket =
        ctx_N.wp(cplx(double(jm), 0.0)) + (2.0 / omega) * ctx_N.eta2();
    const cplx value = pref * pref * bracket;
    if (std::abs(value.imag()) > 1e-12 * (1.0 + std::abs(value.real())))
        throw Error("h_exchange: value failed the realness check");
    return value.real();
}

double h_exchange(int j, int N, double alpha) {
    EllipticContext ctx(double(N), alpha);
    return h_exchange(j, ctx);
}

cplx rho(cplx t, const EllipticContext& ctx_N) {
    return ctx_N.wzeta(t) - (2.0 / ctx_N.period()) * ctx_N.eta1() * t;
}

cplx tilde_sigma(cplx w, cplx t, const EllipticContext& ctx_N) {
    if (ctx_N.lattice_distance(w) < EllipticContext::pole_guard)
        throw DivisionNearZero("tilde_sigma: sigma(w) below guard");
    if (ctx_N.lattice_distance(t) < EllipticContext::pole_guard)
        throw DivisionNearZero("tilde_sigma: sigma(t) below guard");
    const double N = ctx_N.period();
    // compose in log form: the three sigma factors carry exponents of
    // opposite signs that mostly cancel
    const cplx log_ts = (2.0 / N) * ctx_N.eta1() * w * t +
                        ctx_N.wsigma_log(w - t) - ctx_N.wsigma_log(w) -
                        ctx_N.wsigma_log(t);
    return std::exp(log_ts);
}

cplx F_kernel(cplx t, const EllipticContext& ctx_N) {
    const cplx r = rho(t, ctx_N);
    return -ctx_N.wp(t) + r * r + (4.0 / ctx_N.period()) * ctx_N.eta1();
}

}  // namespace ellspin
