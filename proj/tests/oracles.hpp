// Independent numerical oracles used by the test suites.  Everything here
// is computed by routes that share no code with the library: raw lattice
// sums, row-accelerated Eisenstein series, image sums, and a from-scratch
// theta quotient.
#ifndef ELLSPIN_TESTS_ORACLES_HPP
#define ELLSPIN_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

// cot(pi x) and 1 + cot^2(pi x), computed through exp(±2 pi i x) so that
// large |Im x| underflows instead of overflowing.
inline void cot_pi(cplx x, cplx& c, cplx& one_plus_c2) {
    if (x.imag() >= 0.0) {
        const cplx w = std::exp(2.0 * pi * I * x);
        c = -I * (1.0 + w) / (1.0 - w);
        one_plus_c2 = -4.0 * w / ((1.0 - w) * (1.0 - w));
    } else {
        const cplx u = std::exp(-2.0 * pi * I * x);
        c = I * (1.0 + u) / (1.0 - u);
        one_plus_c2 = -4.0 * u / ((1.0 - u) * (1.0 - u));
    }
}

// sum_{m in Z} (x+m)^{-4} via the closed form pi^4 f1 (3 f1 - 2)/3,
// f1 = 1/sin^2(pi x).
inline cplx row_sum4(cplx x) {
    cplx c, f1;
    cot_pi(x, c, f1);
    return pi * pi * pi * pi * f1 * (3.0 * f1 - 2.0) / 3.0;
}

// sum_{m in Z} (x+m)^{-6} = pi^6 f1 (30 f1^2 - 30 f1 + 4)/30.
inline cplx row_sum6(cplx x) {
    cplx c, f1;
    cot_pi(x, c, f1);
    return std::pow(pi, 6) * f1 * (30.0 * f1 * f1 - 30.0 * f1 + 4.0) / 30.0;
}

// Truncated-lattice-sum evaluator for wp, zeta, sigma on the rectangular
// torus (L, i alpha).  The naive |m|,|n| <= box sums are used verbatim and
// their smooth z^2/z^4-type tails are restored exactly through the
// Eisenstein sums E4 = sum' 1/Omega^4 and E6 = sum' 1/Omega^6, themselves
// computed independently by exponentially convergent row sums.
class LatticeOracle {
public:
    LatticeOracle(double L, double alpha, int box = 60)
        : L_(L), alpha_(alpha), box_(box) {
        // Row direction chosen so consecutive rows decay the fastest.
        cplx A, B;
        if (alpha >= L) {
            A = cplx(L, 0.0);
            B = cplx(0.0, alpha);
        } else {
            A = cplx(0.0, alpha);
            B = cplx(L, 0.0);
        }
        const double z4 = std::pow(pi, 4) / 90.0, z6 = std::pow(pi, 6) / 945.0;
        const cplx A4 = std::pow(A, -4), A6 = std::pow(A, -6);
        E4_ = A4 * 2.0 * z4;
        E6_ = A6 * 2.0 * z6;
        for (int n = 1; n <= 2000; ++n) {
            const cplx x = double(n) * B / A;
            const cplx t4 = A4 * row_sum4(x);
            const cplx t6 = A6 * row_sum6(x);
            E4_ += 2.0 * t4;  // n and -n rows are equal for even powers
            E6_ += 2.0 * t6;
            if (std::abs(t4) < 1e-22 * std::abs(E4_) &&
                std::abs(t6) < 1e-24 * std::abs(E6_) && n > 4)
                break;
        }
        E4box_ = 0.0;
        E6box_ = 0.0;
        for (int mm = -box_; mm <= box_; ++mm)
            for (int nn = -box_; nn <= box_; ++nn) {
                if (mm == 0 && nn == 0) continue;
                const cplx Om(double(mm) * L_, double(nn) * alpha_);
                const cplx i2 = 1.0 / (Om * Om);
                E4box_ += i2 * i2;
                E6box_ += i2 * i2 * i2;
            }
    }

    cplx wp_sum(cplx z) const {
        cplx s = 1.0 / (z * z);
        const cplx z2 = z * z, z4 = z2 * z2;
        for (int mm = -box_; mm <= box_; ++mm)
            for (int nn = -box_; nn <= box_; ++nn) {
                if (mm == 0 && nn == 0) continue;
                const cplx Om(double(mm) * L_, double(nn) * alpha_);
                const cplx d = z - Om;
                const cplx i2 = 1.0 / (Om * Om);
                s += 1.0 / (d * d) - i2 - 3.0 * z2 * i2 * i2 -
                     5.0 * z4 * i2 * i2 * i2;
            }
        return s + 3.0 * z2 * E4_ + 5.0 * z4 * E6_;
    }

    cplx zeta_sum(cplx z) const {
        cplx s = 1.0 / z;
        const cplx z3 = z * z * z, z5 = z3 * z * z;
        for (int mm = -box_; mm <= box_; ++mm)
            for (int nn = -box_; nn <= box_; ++nn) {
                if (mm == 0 && nn == 0) continue;
                const cplx Om(double(mm) * L_, double(nn) * alpha_);
                s += 1.0 / (z - Om) + 1.0 / Om + z / (Om * Om);
            }
        return s - z3 * (E4_ - E4box_) - z5 * (E6_ - E6box_);
    }

    cplx sigma_sum(cplx z) const {
        cplx ls = std::log(z);
        const cplx z2 = z * z, z4 = z2 * z2, z6 = z4 * z2;
        for (int mm = -box_; mm <= box_; ++mm)
            for (int nn = -box_; nn <= box_; ++nn) {
                if (mm == 0 && nn == 0) continue;
                const cplx Om(double(mm) * L_, double(nn) * alpha_);
                ls += std::log(1.0 - z / Om) + z / Om + z2 / (2.0 * Om * Om);
            }
        ls += -(z4 / 4.0) * (E4_ - E4box_) - (z6 / 6.0) * (E6_ - E6box_);
        return std::exp(ls);
    }

private:
    double L_, alpha_;
    int box_;
    cplx E4_, E6_, E4box_, E6box_;
};

// Exchange oracle: the exact hyperbolic image sum
//   h(j) = sum_n sinh^2(pi/alpha) / sinh^2(pi (j + n N)/alpha).
inline double h_image_sum(int j, int N, double alpha) {
    const double s1 = std::sinh(pi / alpha);
    double total = 0.0;
    for (int n = -300; n <= 300; ++n) {
        const double x = pi * (double(j) + double(n) * N) / alpha;
        const double sh = std::sinh(x);
        const double r = s1 / sh;
        total += r * r;
    }
    return total;
}

// From-scratch theta_1 series (direct frame only, nome q = exp(-pi a/L)).
inline cplx theta1_series(cplx v, double q, int terms = 48) {
    cplx s = 0.0;
    for (int n = 0; n < terms; ++n) {
        const double a =
            std::pow(q, (n + 0.5) * (n + 0.5)) * ((n % 2) ? -1.0 : 1.0);
        s += a * std::sin((2.0 * n + 1.0) * v);
    }
    return 2.0 * s;
}

inline double theta1_prime0(double q, int terms = 48) {
    double s = 0.0;
    for (int n = 0; n < terms; ++n) {
        const double a =
            std::pow(q, (n + 0.5) * (n + 0.5)) * ((n % 2) ? -1.0 : 1.0);
        s += a * (2.0 * n + 1.0);
    }
    return 2.0 * s;
}

// Independent tilde_sigma route: in the direct frame the sigma prefactors
// cancel and tilde_sigma_w(t) = (pi theta'(0)/N) theta(pi(w-t)/N) /
// (theta(pi w/N) theta(pi t/N)).
inline cplx tilde_sigma_theta(cplx w, cplx t, double N, double alpha) {
    const double q = std::exp(-pi * alpha / N);
    const cplx vw = pi * w / N, vt = pi * t / N, vwt = pi * (w - t) / N;
    return (pi * theta1_prime0(q) / N) * theta1_series(vwt, q) /
           (theta1_series(vw, q) * theta1_series(vt, q));
}

}  // namespace oracles

#endif
