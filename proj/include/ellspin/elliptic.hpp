#ifndef ELLSPIN_ELLIPTIC_HPP
#define ELLSPIN_ELLIPTIC_HPP

#include <complex>
#include <vector>

#include "ellspin/errors.hpp"

namespace ellspin {

using cplx = std::complex<double>;

// Rectangular torus C / (Z*omega1 + Z*omega2) with omega1 real positive
// and omega2 = i*alpha, alpha > 0.
struct Torus {
    cplx omega1;
    cplx omega2;

    static Torus rectangular(double length, double alpha);
    double length() const { return omega1.real(); }
    double alpha() const { return omega2.imag(); }
};

enum class EllipticMode { automatic, direct, swapped };

// Evaluation backend for the Weierstrass functions on one torus.
//
// Theta q-series with nome exp(-pi*alpha/L) in the direct frame; for
// alpha < L the periods are swapped (same lattice, basis (omega2,
// -omega1)) and the series runs with nome exp(-pi*L/alpha) instead.  The
// working nome therefore never exceeds exp(-pi) ~ 0.0432: with a larger
// nome the alternating sums lose enough digits to be visible after the
// spin-chain prefactor amplification.
// Contexts are immutable after construction and safe for concurrent reads.
class EllipticContext {
public:
    static constexpr double pole_guard = 1e-8;
    // largest working nome in automatic mode, exp(-pi)
    static constexpr double swap_threshold = 0.04321391826377224;

    EllipticContext(double period_length, double alpha,
                    EllipticMode mode = EllipticMode::automatic);

    const Torus& torus() const { return torus_; }
    double period() const { return torus_.length(); }
    double alpha() const { return torus_.alpha(); }

    // Nome in the (omega1, omega2) basis, exp(i*pi*omega2/omega1); |nome| < 1.
    cplx nome() const { return cplx(nome_direct_, 0.0); }
    int truncation() const { return truncation_; }
    bool swapped() const { return swapped_; }

    cplx eta1() const { return eta1_; }  // zeta(omega1/2)
    cplx eta2() const { return eta2_; }  // zeta(omega2/2)

    cplx wp(cplx z) const;
    cplx wzeta(cplx z) const;
    cplx wsigma(cplx z) const;

    // log sigma up to an irrelevant multiple of 2 pi i; lets ratios of
    // sigmas with huge exponential factors be composed without overflow
    // or cancellation.
    cplx wsigma_log(cplx z) const;

    // Distance from z to the nearest lattice point.
    double lattice_distance(cplx z) const;

private:
    struct Reduced {
        cplx z0;
        long m;
        long n;
    };
    Reduced reduce(cplx z) const;
    void guard(const Reduced& r, const char* who) const;

    // theta_1 and derivatives at v; derivatives up to order `nder` filled.
    void theta1(cplx v, int nder, cplx out[4]) const;

    cplx zeta_raw(cplx z) const;   // no argument reduction
    cplx sigma_raw(cplx z) const;  // no argument reduction

    Torus torus_;
    bool swapped_ = false;
    double nome_direct_ = 0.0;  // exp(-pi*alpha/L)
    double nome_frame_ = 0.0;   // nome of the evaluation frame
    int truncation_ = 0;
    cplx frame_w1_, frame_w2_;
    cplx eta_frame_;  // zeta(frame_w1/2)
    cplx eta1_, eta2_;
    std::vector<double> coeff_;  // (-1)^n q^{(n+1/2)^2}
    double theta1p0_ = 0.0;      // theta_1'(0)
};

// --- torus operations ----------------------------------------------------

cplx wp(cplx z, const EllipticContext& ctx);
cplx wzeta(cplx z, const EllipticContext& ctx);
cplx wsigma(cplx z, const EllipticContext& ctx);

// Exchange function h(j) of the spin chain on N sites.
double h_exchange(int j, const EllipticContext& ctx_N);
double h_exchange(int j, int N, double alpha);

// rho(t) = zeta_N(t) - (2/N) zeta_N(N/2) t; exactly N-periodic.
cplx rho(cplx t, const EllipticContext& ctx_N);

// tilde_sigma_w(t) = exp((2/N) zeta_N(N/2) w t) sigma(w-t)/(sigma(w) sigma(t)).
cplx tilde_sigma(cplx w, cplx t, const EllipticContext& ctx_N);

// F(t) = -wp_N(t) + rho(t)^2 + (4/N) zeta_N(N/2).
cplx F_kernel(cplx t, const EllipticContext& ctx_N);

}  // namespace ellspin

#endif
