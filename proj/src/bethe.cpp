#include "ellspin/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <set>

#include "ellspin/dense.hpp"
#include "ellspin/wavefunction.hpp"

namespace ellspin {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// --- extended-precision residual core -----------------------------------
// The spin energy is orders of magnitude more sensitive to the root
// position than the residual itself in the small-alpha corner, so the
// final polish evaluates the residual in long double.  Only zeta and the
// eta constants are needed.
namespace xp {

using real = long double;
using C = std::complex<real>;
constexpr real pil = 3.141592653589793238462643383279503L;

struct Ctx {
    real L, a;
    bool swapped;
    C W1;
    real q;
    int trunc;
    std::vector<real> coef;  // (-1)^n q^{(n+1/2)^2}
    C eta_frame, eta1, eta2;

    Ctx(real L_, real a_) : L(L_), a(a_) {
        const real q_direct = std::exp(-pil * a / L);
        swapped = q_direct > 0.0432139182637722L;
        if (!swapped) {
            W1 = C(L, 0.0L);
            q = q_direct;
        } else {
            W1 = C(0.0L, a);
            q = std::exp(-pil * L / a);
        }
        int k = 2;
        while (k < 96 &&
               std::pow(2.0L * k + 1.0L, 3.0L) *
                       std::pow(q, real(k) * real(k) - 0.25L) >=
                   1e-21L)
            ++k;
        trunc = k;
        coef.resize(size_t(trunc) + 1);
        const real lq = std::log(q);
        for (size_t n = 0; n < coef.size(); ++n) {
            const real e = (real(n) + 0.5L) * (real(n) + 0.5L) * lq;
            coef[n] = (n % 2 == 0) ? std::exp(e) : -std::exp(e);
        }
        real d1 = 0.0L, d3 = 0.0L;
        for (size_t n = 0; n < coef.size(); ++n) {
            const real f = 2.0L * real(n) + 1.0L;
            d1 += coef[n] * f;
            d3 += coef[n] * f * f * f;
        }
        eta_frame = -(pil * pil) * (-2.0L * d3) / (6.0L * W1 * (2.0L * d1));
        if (!swapped) {
            eta1 = eta_frame;
            eta2 = zeta_raw(C(0.0L, a / 2.0L));
        } else {
            eta2 = eta_frame;
            eta1 = zeta_raw(C(L / 2.0L, 0.0L));
        }
    }

    void theta01(C v, C& t0, C& t1) const {
        const C s1 = std::sin(v), c1 = std::cos(v);
        const C s2 = 2.0L * s1 * c1, c2 = c1 * c1 - s1 * s1;
        C sn = s1, cn = c1;
        t0 = C(0.0L);
        t1 = C(0.0L);
        for (size_t n = 0; n < coef.size(); ++n) {
            const real f = 2.0L * real(n) + 1.0L;
            t0 += coef[n] * sn;
            t1 += coef[n] * f * cn;
            const C snn = sn * c2 + cn * s2;
            const C cnn = cn * c2 - sn * s2;
            sn = snn;
            cn = cnn;
        }
        t0 *= 2.0L;
        t1 *= 2.0L;
    }

    C zeta_raw(C z) const {
        C t0, t1;
        theta01(pil * z / W1, t0, t1);
        return 2.0L * eta_frame * z / W1 + (pil / W1) * t1 / t0;
    }

    C zeta(C z) const {
        const long mm = std::lround((double)(z.real() / L));
        const long nn = std::lround((double)(z.imag() / a));
        const C z0 = z - C(real(mm) * L, real(nn) * a);
        return zeta_raw(z0) + 2.0L * real(mm) * eta1 + 2.0L * real(nn) * eta2;
    }

    C rho(C t) const { return zeta(t) - (2.0L / L) * eta1 * t; }
};

C to_xp(cplx z) { return C((real)z.real(), (real)z.imag()); }
cplx to_d(C z) { return cplx((double)z.real(), (double)z.imag()); }

}  // namespace xp

std::vector<cplx> q_tilde_of(const std::vector<cplx>& t,
                             const BetheQuantumNumbers& qn,
                             const ColorMap& cm, const ModelParams& params) {
    const auto q = q_from_t(t, cm, params.N);
    std::vector<cplx> qt(q.size());
    const cplx omega(0.0, params.alpha);
    for (size_t b = 0; b < q.size(); ++b)
        qt[b] = q[b] + double(qn.l[b]) * omega / double(params.N);
    return qt;
}

}  // namespace

std::vector<cplx> t_residual(const std::vector<cplx>& t,
                             const std::vector<cplx>& p, const ColorMap& cm,
                             const EllipticContext& ctx_N) {
    const int m = cm.m;
    const int M = cm.M;
    std::vector<cplx> r(static_cast<size_t>(m));
    for (int j = 1; j <= m; ++j) {
        const int cj = cm.color(j);
        cplx acc = 0.0;
        for (int l = 1; l <= m; ++l) {
            if (l == j) continue;
            const cplx diff = t[size_t(j - 1)] - t[size_t(l - 1)];
            const int cl = cm.color(l);
            if (std::abs(cl - cj) == 1) {
                if (ctx_N.lattice_distance(diff) < 1e-9)
                    throw DegenerateT("t_residual: adjacent-color collision");
                acc += rho(diff, ctx_N);
            } else if (cl == cj) {
                if (ctx_N.lattice_distance(diff) < 1e-9)
                    throw DegenerateT("t_residual: same-color collision");
                acc -= 2.0 * rho(diff, ctx_N);
            }
        }
        if (cj == 1) acc += double(M) * rho(t[size_t(j - 1)], ctx_N);
        acc -= I * (p[size_t(cj - 1)] - p[size_t(cj)]);
        r[size_t(j - 1)] = acc;
    }
    return r;
}

std::pair<cplx, cplx> f_eps(cplx q_tilde, const EllipticContext& ctx_1) {
    const cplx f = 2.0 * q_tilde * ctx_1.eta1() - ctx_1.wzeta(q_tilde);
    const cplx eps = 0.5 * ctx_1.wp(q_tilde);
    return {f, eps};
}

std::vector<cplx> p_closure_residual(const BetheRoots& roots,
                                     const ModelParams& params,
                                     const EllipticContext& ctx_1) {
    const int M = static_cast<int>(roots.p.size());
    std::vector<cplx> r(static_cast<size_t>(M));
    for (int b = 0; b < M; ++b) {
        const cplx ptilde =
            roots.p[size_t(b)] -
            2.0 * pi * double(roots.quantum_numbers.l[size_t(b)]) /
                double(params.N);
        r[size_t(b)] = f_eps(roots.q_tilde[size_t(b)], ctx_1).first +
                       I * ptilde;
    }
    return r;
}

namespace {

struct System {
    const BetheQuantumNumbers& qn;
    const ModelParams& params;
    const ColorMap& cm;
    const EllipticContext& ctx_N;
    const EllipticContext& ctx_1;
    int M, m;
    mutable std::shared_ptr<xp::Ctx> xN, x1;

    // u = [p_1..p_M, t_1..t_m]
    std::vector<cplx> residual(const std::vector<cplx>& u) const {
        std::vector<cplx> p(u.begin(), u.begin() + M);
        std::vector<cplx> t(u.begin() + M, u.end());
        const auto qt = q_tilde_of(t, qn, cm, params);
        std::vector<cplx> r(static_cast<size_t>(M + m));
        for (int b = 0; b < M; ++b) {
            if (ctx_1.lattice_distance(qt[size_t(b)]) < 1e-9)
                throw PoleProximity("bethe: q_tilde on the unit-torus lattice");
            const cplx ptilde =
                p[size_t(b)] -
                2.0 * pi * double(qn.l[size_t(b)]) / double(params.N);
            r[size_t(b)] = f_eps(qt[size_t(b)], ctx_1).first + I * ptilde;
        }
        const auto rt = t_residual(t, p, cm, ctx_N);
        for (int j = 0; j < m; ++j) r[size_t(M + j)] = rt[size_t(j)];
        return r;
    }

    // Extended-precision twin of residual(), double in and double out.
    std::vector<cplx> residual_xp(const std::vector<cplx>& u) const {
        using xp::C;
        if (!xN) {
            xN = std::make_shared<xp::Ctx>((xp::real)params.N,
                                           (xp::real)params.alpha);
            x1 = std::make_shared<xp::Ctx>((xp::real)1.0,
                                           (xp::real)params.alpha);
        }
        std::vector<C> p(static_cast<size_t>(M));
        std::vector<C> t(static_cast<size_t>(m));
        for (int b = 0; b < M; ++b) p[size_t(b)] = xp::to_xp(u[size_t(b)]);
        for (int j = 0; j < m; ++j)
            t[size_t(j)] = xp::to_xp(u[size_t(M + j)]);
        const C omega(0.0L, (xp::real)params.alpha);
        std::vector<cplx> r(static_cast<size_t>(M + m));
        for (int b = 1; b <= M; ++b) {
            C q(0.0L);
            for (int l = 1; l <= m; ++l) {
                if (cm.color(l) == b) q += t[size_t(l - 1)];
                if (cm.color(l) == b - 1) q -= t[size_t(l - 1)];
            }
            q /= (xp::real)params.N;
            const C qtb =
                q + (xp::real)qn.l[size_t(b - 1)] * omega / (xp::real)params.N;
            if (ctx_1.lattice_distance(xp::to_d(qtb)) < 1e-9)
                throw PoleProximity("bethe: q_tilde on the unit-torus lattice");
            const C f = 2.0L * qtb * x1->eta1 - x1->zeta(qtb);
            const C ptilde =
                p[size_t(b - 1)] -
                2.0L * xp::pil * (xp::real)qn.l[size_t(b - 1)] /
                    (xp::real)params.N;
            r[size_t(b - 1)] = xp::to_d(f + C(0.0L, 1.0L) * ptilde);
        }
        for (int j = 1; j <= m; ++j) {
            const int cj = cm.color(j);
            C acc(0.0L);
            for (int l = 1; l <= m; ++l) {
                if (l == j) continue;
                const C diff = t[size_t(j - 1)] - t[size_t(l - 1)];
                const int cl = cm.color(l);
                if (std::abs(cl - cj) == 1) {
                    if (ctx_N.lattice_distance(xp::to_d(diff)) < 1e-9)
                        throw DegenerateT("t_residual: collision");
                    acc += xN->rho(diff);
                } else if (cl == cj) {
                    if (ctx_N.lattice_distance(xp::to_d(diff)) < 1e-9)
                        throw DegenerateT("t_residual: collision");
                    acc -= 2.0L * xN->rho(diff);
                }
            }
            if (cj == 1) acc += (xp::real)M * xN->rho(t[size_t(j - 1)]);
            acc -= C(0.0L, 1.0L) *
                   (p[size_t(cj - 1)] - p[size_t(cj)]);
            r[size_t(M + j - 1)] = xp::to_d(acc);
        }
        return r;
    }

    double norm_inf(const std::vector<cplx>& r) const {
        double n = 0.0;
        for (const cplx& x : r)
            n = std::max({n, std::abs(x.real()), std::abs(x.imag())});
        return n;
    }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

double try_norm(const System& sys, const std::vector<cplx>& u,
                std::vector<cplx>& r_out) {
    try {
        r_out = sys.residual(u);
        double n = sys.norm_inf(r_out);
        if (!std::isfinite(n)) return kInf;
        return n;
    } catch (const Error&) {
        return kInf;
    }
}

// One damped Newton run from a given start; returns the final iterate and
// residual norm, converged flag set by the caller's tolerance.
struct NewtonOutcome {
    std::vector<cplx> u;
    double norm = kInf;
    int iterations = 0;
};

NewtonOutcome newton(const System& sys, std::vector<cplx> u,
                     const SolveOptions& opts) {
    const int n = static_cast<int>(u.size());
    NewtonOutcome out;
    std::vector<cplx> r;
    double cur = try_norm(sys, u, r);
    if (cur == kInf) {
        out.u = u;
        return out;
    }
    for (int it = 0; it < opts.max_iter; ++it) {
        if (cur < opts.tol) break;
        // complex Jacobian by central differences
        std::vector<cplx> J(static_cast<size_t>(n) * n);
        bool jac_ok = true;
        for (int k = 0; k < n && jac_ok; ++k) {
            std::vector<cplx> up = u, dn = u;
            up[size_t(k)] += opts.jacobian_step;
            dn[size_t(k)] -= opts.jacobian_step;
            try {
                const auto rp = sys.residual(up);
                const auto rm = sys.residual(dn);
                for (int i = 0; i < n; ++i)
                    J[size_t(i) * n + size_t(k)] =
                        (rp[size_t(i)] - rm[size_t(i)]) /
                        (2.0 * opts.jacobian_step);
            } catch (const Error&) {
                jac_ok = false;
            }
        }
        if (!jac_ok) break;
        std::vector<cplx> rhs(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) rhs[size_t(i)] = -r[size_t(i)];
        std::vector<cplx> step;
        try {
            step = lu_solve(J, rhs);
        } catch (const std::exception&) {
            break;
        }
        double lambda = 1.0;
        bool accepted = false;
        for (int back = 0; back < 24; ++back) {
            std::vector<cplx> cand(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i)
                cand[size_t(i)] = u[size_t(i)] + lambda * step[size_t(i)];
            std::vector<cplx> rc;
            const double nc = try_norm(sys, cand, rc);
            if (nc < (1.0 - 1e-4 * lambda) * cur) {
                u = std::move(cand);
                r = std::move(rc);
                cur = nc;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        ++out.iterations;
        if (!accepted) break;
    }
    // Floor polish: the energy is far more sensitive than the residual in
    // the stiff corner of the family, so once the tolerance is met push the
    // iterate to the floor of an extended-precision residual.
    if (cur < opts.tol) {
        auto xp_norm = [&](const std::vector<cplx>& v,
                           std::vector<cplx>& rr) -> double {
            try {
                rr = sys.residual_xp(v);
                const double nn = sys.norm_inf(rr);
                return std::isfinite(nn) ? nn : kInf;
            } catch (const Error&) {
                return kInf;
            }
        };
        std::vector<cplx> rx;
        double curx = xp_norm(u, rx);
        for (int extra = 0; extra < 8 && curx != kInf; ++extra) {
            std::vector<cplx> J(static_cast<size_t>(n) * n);
            bool ok = true;
            for (int k = 0; k < n && ok; ++k) {
                std::vector<cplx> up = u, dn = u;
                up[size_t(k)] += opts.jacobian_step;
                dn[size_t(k)] -= opts.jacobian_step;
                try {
                    const auto rp = sys.residual(up);
                    const auto rm = sys.residual(dn);
                    for (int i = 0; i < n; ++i)
                        J[size_t(i) * n + size_t(k)] =
                            (rp[size_t(i)] - rm[size_t(i)]) /
                            (2.0 * opts.jacobian_step);
                } catch (const Error&) {
                    ok = false;
                }
            }
            if (!ok) break;
            std::vector<cplx> rhs(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) rhs[size_t(i)] = -rx[size_t(i)];
            std::vector<cplx> step;
            try {
                step = lu_solve(J, rhs);
            } catch (const std::exception&) {
                break;
            }
            bool improved = false;
            double lambda = 1.0;
            for (int back = 0; back < 6; ++back) {
                std::vector<cplx> cand(static_cast<size_t>(n));
                for (int i = 0; i < n; ++i)
                    cand[size_t(i)] = u[size_t(i)] + lambda * step[size_t(i)];
                std::vector<cplx> rc;
                const double nc = xp_norm(cand, rc);
                if (nc < curx) {
                    u = std::move(cand);
                    rx = std::move(rc);
                    curx = nc;
                    improved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!improved) break;
        }
        if (curx != kInf) cur = std::min(cur, std::max(curx, 0.0));
    }
    out.u = std::move(u);
    out.norm = cur;
    return out;
}

// Closed-form p from the closure relation, p = 2 pi l/N + i f(q~(t)).
bool p_from_t(const std::vector<cplx>& t, const BetheQuantumNumbers& qn,
              const ColorMap& cm, const ModelParams& params,
              const EllipticContext& ctx_1, std::vector<cplx>& p_out) {
    const auto qt = q_tilde_of(t, qn, cm, params);
    p_out.assign(qt.size(), cplx(0.0, 0.0));
    for (size_t b = 0; b < qt.size(); ++b) {
        if (ctx_1.lattice_distance(qt[b]) < 1e-6) return false;
        p_out[b] = 2.0 * pi * double(qn.l[b]) / double(params.N) +
                   I * f_eps(qt[b], ctx_1).first;
    }
    return true;
}

// Seed list for the auxiliary parameters.  Root families observed across
// the two-magnon landscape: imaginary-axis scattering roots (cot guess),
// half-period roots, real-axis bound pairs, and roots on the Re t = 0
// line; the tail is a deterministic low-discrepancy spread.
std::vector<std::vector<cplx>> t_seed_list(const BetheQuantumNumbers& qn,
                                           const ColorMap& cm, double N,
                                           double alpha, int cap) {
    const int m = cm.m;
    std::vector<std::vector<cplx>> seeds;
    if (m == 0) {
        seeds.push_back({});
        return seeds;
    }

    // cot-based guess for the pair gap g: t = i N log((g+1)/(g-1)) / (2 pi)
    auto pair_seed = [&](int g) -> cplx {
        g = ((g % int(N)) + int(N)) % int(N);
        if (g > int(N) / 2) g = int(N) - g;
        if (g == 0) return cplx(0.18 * N, 0.0);
        if (g == 1) return cplx(0.0, 0.55 * std::min(alpha, N / 2.0));
        const double gap = double(g);
        return cplx(0.0, N * std::log((gap + 1.0) / (gap - 1.0)) / (2.0 * pi));
    };

    const int M = cm.M;
    const double s_im = std::min(alpha, N / 2.0);
    auto push = [&](const std::vector<cplx>& base) {
        // offsets keep same-color entries separated
        std::vector<cplx> s = base;
        for (int j = 0; j < m; ++j)
            s[size_t(j)] += cplx(0.017 * j, 0.013 * (j % 2 ? j : -j));
        seeds.push_back(std::move(s));
    };

    {
        // structured seed driven by the momentum gaps of the tuple
        std::vector<cplx> s(static_cast<size_t>(m));
        for (int j = 1; j <= m; ++j) {
            const int col = cm.color(j);
            int idx = 0;
            for (int l = 1; l < j; ++l)
                if (cm.color(l) == col) ++idx;
            const int b1 = std::min(col - 1 + idx, M - 2);
            const int g = qn.l[size_t(b1 + 1)] - qn.l[size_t(b1)];
            s[size_t(j - 1)] = pair_seed(g);
        }
        push(s);
    }
    // uniform families
    for (cplx base : {cplx(N / 2.0, 0.0), cplx(N / 2.0, 0.3 * s_im),
                      cplx(0.10 * N, 0.0), cplx(0.20 * N, 0.0),
                      cplx(0.33 * N, 0.0), cplx(0.0, 0.15 * s_im),
                      cplx(0.0, 0.30 * s_im), cplx(0.0, 0.45 * s_im),
                      cplx(0.0, 0.70 * s_im), cplx(N / 2.0, 0.6 * s_im)}) {
        std::vector<cplx> s(static_cast<size_t>(m), base);
        push(s);
    }

    // mixed families: bound pairs riding with scattering magnons put a
    // real-axis parameter next to imaginary-axis ones
    if (m >= 2) {
        const std::vector<cplx> bases = {
            cplx(0.18 * N, 0.0), cplx(0.0, 0.30 * s_im),
            cplx(N / 2.0, 0.0), cplx(0.0, 0.60 * s_im)};
        for (size_t b1 = 0; b1 < bases.size(); ++b1)
            for (size_t b2 = 0; b2 < bases.size(); ++b2) {
                if (b1 == b2) continue;
                std::vector<cplx> s(static_cast<size_t>(m), bases[b2]);
                s[0] = bases[b1];
                if (m >= 3) s[size_t(m - 1)] = bases[(b1 + b2) % bases.size()];
                push(s);
            }
    }

    // low-discrepancy spread (golden-ratio lattice), deterministic
    for (int k = 0; static_cast<int>(seeds.size()) < cap; ++k) {
        std::vector<cplx> s(static_cast<size_t>(m));
        for (int j = 0; j < m; ++j) {
            const double a1 =
                std::fmod(0.382 + 0.6180339887 * (k + 3 * j + 1), 1.0);
            const double a2 =
                std::fmod(0.271 + 0.7548776662 * (k + 5 * j + 2), 1.0);
            s[size_t(j)] = cplx(a1 * N, (a2 - 0.5) * 2.0 * 0.45 * s_im);
        }
        seeds.push_back(std::move(s));
    }
    return seeds;
}

BetheRoots finalize(const System& sys, const NewtonOutcome& nt,
                    const BetheQuantumNumbers& qn, const ModelParams& params,
                    const SolveOptions& opts) {
    BetheRoots out;
    out.quantum_numbers = qn;
    out.p.assign(nt.u.begin(), nt.u.begin() + sys.M);
    out.t.assign(nt.u.begin() + sys.M, nt.u.end());
    out.iterations = nt.iterations;
    out.residual_norm = nt.norm;
    out.converged = nt.norm < opts.tol;
    out.q = q_from_t(out.t, sys.cm, params.N);
    out.q_tilde = q_tilde_of(out.t, qn, sys.cm, params);
    out.f.resize(out.q_tilde.size());
    out.eps.resize(out.q_tilde.size());
    for (size_t b = 0; b < out.q_tilde.size(); ++b) {
        const auto fe = f_eps(out.q_tilde[b], sys.ctx_1);
        out.f[b] = fe.first;
        out.eps[b] = fe.second;
    }
    return out;
}

bool same_p_multiset(const std::vector<cplx>& a, const std::vector<cplx>& b,
                     double tol) {
    auto as = a, bs = b;
    auto cmp = [](const cplx& x, const cplx& y) {
        return x.real() != y.real() ? x.real() < y.real()
                                    : x.imag() < y.imag();
    };
    std::sort(as.begin(), as.end(), cmp);
    std::sort(bs.begin(), bs.end(), cmp);
    for (size_t i = 0; i < as.size(); ++i)
        if (std::abs(as[i] - bs[i]) >= tol) return false;
    return true;
}

// Fill E_sf and calE always; E_M only when real (NaN otherwise).
void energy_fill(BetheRoots& roots, const ModelParams& params,
                 const EllipticContext& ctxN, const EllipticContext& ctx1) {
    const int M = static_cast<int>(roots.p.size());
    const ColorMap cm = color_map(M);
    cplx esf = -2.0 * double(M) * double(M - 1) / double(params.N) *
               ctxN.eta1();
    for (int b = 0; b < M; ++b)
        esf += roots.p[size_t(b)] * roots.p[size_t(b)] / 2.0;
    cplx pair_sum = 0.0;
    for (int k = 1; k <= cm.m; ++k)
        for (int l = k + 1; l <= cm.m; ++l) {
            const int ck = cm.color(k), cl = cm.color(l);
            cplx coef = 0.0;
            if (ck == cl) coef = 2.0;
            if (std::abs(ck - cl) == 1) coef -= 1.0;
            if (coef != 0.0)
                pair_sum += coef * F_kernel(roots.t[size_t(k - 1)] -
                                                roots.t[size_t(l - 1)],
                                            ctxN);
        }
    cplx color1_sum = 0.0;
    for (int k = 1; k <= cm.m; ++k)
        if (cm.color(k) == 1)
            color1_sum += F_kernel(roots.t[size_t(k - 1)], ctxN);
    esf -= 0.5 * (pair_sum - double(M) * color1_sum);

    cplx cal = esf;
    for (const cplx& e : roots.eps) cal += e;
    roots.energies.E_sf = esf;
    roots.energies.calE = cal;
    try {
        roots.energies.E_M = energy_map(cal, params, M, ctxN, ctx1);
    } catch (const NonRealEnergy&) {
        roots.energies.E_M = std::numeric_limits<double>::quiet_NaN();
    }
}

// All distinct converged roots reachable from the seed list, direct solve
// at the target alpha first, continuation from the trigonometric corner as
// a fallback when nothing converges directly.
std::vector<BetheRoots> solve_candidates(const BetheQuantumNumbers& qn,
                                         const ModelParams& params,
                                         const SolveOptions& opts,
                                         int max_candidates,
                                         const EllipticContext& ctxN,
                                         const EllipticContext& ctx1) {
    const int M = static_cast<int>(qn.l.size());
    const ColorMap cm = color_map(M);
    System sys{qn, params, cm, ctxN, ctx1, M, cm.m, {}, {}};

    std::vector<BetheRoots> cands;
    auto consider = [&](const NewtonOutcome& nt) {
        if (!(nt.norm < opts.tol)) return;
        BetheRoots r = finalize(sys, nt, qn, params, opts);
        for (const auto& prev : cands)
            if (same_p_multiset(prev.p, r.p, 1e-7)) return;
        energy_fill(r, params, ctxN, ctx1);
        cands.push_back(std::move(r));
    };

    const auto seeds =
        t_seed_list(qn, cm, double(params.N), params.alpha, opts.max_seeds);
    for (const auto& tseed : seeds) {
        if (static_cast<int>(cands.size()) >= max_candidates) break;
        std::vector<cplx> pseed;
        if (!p_from_t(tseed, qn, cm, params, ctx1, pseed)) continue;
        std::vector<cplx> u0;
        u0.insert(u0.end(), pseed.begin(), pseed.end());
        u0.insert(u0.end(), tseed.begin(), tseed.end());
        consider(newton(sys, u0, opts));
    }
    if (!cands.empty() || params.alpha >= opts.alpha_start) return cands;

    // continuation fallback
    const double a0 = opts.alpha_start;
    EllipticContext ctxN0(double(params.N), a0);
    EllipticContext ctx10(1.0, a0);
    const ModelParams p0{params.N, a0, params.J};
    System sys0{qn, p0, cm, ctxN0, ctx10, M, cm.m, {}, {}};
    const auto seeds0 =
        t_seed_list(qn, cm, double(params.N), a0, opts.max_seeds);
    for (const auto& tseed : seeds0) {
        if (static_cast<int>(cands.size()) >= max_candidates) break;
        std::vector<cplx> pseed;
        if (!p_from_t(tseed, qn, cm, p0, ctx10, pseed)) continue;
        std::vector<cplx> u0;
        u0.insert(u0.end(), pseed.begin(), pseed.end());
        u0.insert(u0.end(), tseed.begin(), tseed.end());
        auto nt = newton(sys0, u0, opts);
        if (!(nt.norm < opts.tol)) continue;
        std::vector<cplx> u = nt.u;
        const double ratio =
            std::pow(params.alpha / a0, 1.0 / opts.continuation_steps);
        double a = a0;
        bool lost = false;
        for (int s = 1; s <= opts.continuation_steps; ++s) {
            a = (s == opts.continuation_steps) ? params.alpha : a * ratio;
            EllipticContext cN(double(params.N), a);
            EllipticContext c1(1.0, a);
            const ModelParams pa{params.N, a, params.J};
            System sa{qn, pa, cm, cN, c1, M, cm.m, {}, {}};
            auto st = newton(sa, u, opts);
            if (!(st.norm < opts.tol)) {
                lost = true;
                break;
            }
            u = std::move(st.u);
        }
        if (lost) continue;
        consider(newton(sys, u, opts));
    }
    return cands;
}

}  // namespace

std::vector<std::vector<int>> nondecreasing_tuples(
    const std::vector<int>& range, int M) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(static_cast<size_t>(M), 0);
    const int R = static_cast<int>(range.size());
    if (R == 0 || M == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        std::vector<int> tuple(static_cast<size_t>(M));
        for (int i = 0; i < M; ++i) tuple[size_t(i)] = range[size_t(idx[size_t(i)])];
        out.push_back(tuple);
        int i = M - 1;
        while (i >= 0 && idx[size_t(i)] == R - 1) --i;
        if (i < 0) break;
        ++idx[size_t(i)];
        for (int k = i + 1; k < M; ++k) idx[size_t(k)] = idx[size_t(i)];
    }
    return out;
}

BetheRoots solve(const BetheQuantumNumbers& qn, const ModelParams& params,
                 const SolveOptions& opts,
                 const std::optional<std::vector<cplx>>& init) {
    params.validate();
    const int M = static_cast<int>(qn.l.size());
    if (M < 1 || M > 5) throw InvalidM("bethe solve: need 1 <= M <= 5");
    const ColorMap cm = color_map(M);

    EllipticContext ctxN(double(params.N), params.alpha);
    EllipticContext ctx1(1.0, params.alpha);

    if (init) {
        System sys{qn, params, cm, ctxN, ctx1, M, cm.m, {}, {}};
        const auto nt = newton(sys, *init, opts);
        auto out = finalize(sys, nt, qn, params, opts);
        if (!out.converged)
            throw NoConvergence("bethe solve: Newton stalled from given seed");
        energy_fill(out, params, ctxN, ctx1);
        return out;
    }

    auto cands = solve_candidates(qn, params, opts, 4, ctxN, ctx1);
    if (cands.empty())
        throw NoConvergence("bethe solve: no seed converged for this tuple");
    // prefer a candidate whose energy came out real
    for (auto& c : cands)
        if (std::isfinite(c.energies.E_M)) return c;
    return cands.front();
}

BetheEnergies energy(BetheRoots& roots, const ModelParams& params) {
    EllipticContext ctxN(double(params.N), params.alpha);
    EllipticContext ctx1(1.0, params.alpha);
    energy_fill(roots, params, ctxN, ctx1);
    if (!std::isfinite(roots.energies.E_M))
        throw NonRealEnergy("bethe energy: lattice eigenvalue maps to a "
                            "non-real spin energy");
    return roots.energies;
}

namespace {

// Lattice wavefunction of a root over the sector basis; null (the
// symmetrization cancels identically) is reported through the flag.
struct RootState {
    std::vector<cplx> psi;
    bool null_state = false;
    bool degenerate = false;
};

RootState root_state(const BetheRoots& r,
                     const std::vector<SpinBasisState>& basis,
                     const EllipticContext& ctxN) {
    RootState out;
    try {
        auto cp = make_chi_parameters(r.p, r.t, ctxN);
        auto ansatz =
            make_lattice_ansatz(std::move(cp), r.quantum_numbers.l);
        double maxabs = 0.0;
        std::vector<double> scales;
        scales.reserve(basis.size());
        out.psi.reserve(basis.size());
        for (const auto& state : basis) {
            const auto [v, s] = psi_lattice_with_scale(state, ansatz);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) ||
                !std::isfinite(s)) {
                out.degenerate = true;
                out.null_state = true;
                return out;
            }
            out.psi.push_back(v);
            maxabs = std::max(maxabs, std::abs(v));
            scales.push_back(s);
        }
        std::nth_element(scales.begin(), scales.begin() + scales.size() / 2,
                         scales.end());
        const double med = scales[scales.size() / 2];
        out.null_state = maxabs < 1e-8 * std::max(med, 1e-30);
    } catch (const Error&) {
        out.degenerate = true;
        out.null_state = true;
    }
    return out;
}

double state_overlap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx ip(0.0, 0.0);
    double na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        ip += std::conj(a[i]) * b[i];
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(ip) / std::sqrt(na * nb);
}

}  // namespace

MatchReport enumerate_and_match(const ModelParams& params, int M,
                                const std::vector<int>& l_range,
                                const EDResult& ed, double match_tol,
                                const SolveOptions& opts) {
    MatchReport rep;
    rep.params = params;
    rep.M = M;
    rep.l_range = l_range;
    rep.ed_eigenvalues = ed.record.eigenvalues;
    rep.ed_highest_weight = ed.highest_weight;
    for (bool b : ed.highest_weight) rep.hw_levels += b;

    EllipticContext ctxN(double(params.N), params.alpha);
    EllipticContext ctx1(1.0, params.alpha);
    const ColorMap cm = color_map(M);

    const auto tuples = nondecreasing_tuples(l_range, M);
    rep.tuples_attempted = static_cast<int>(tuples.size());

    // lattice wavefunctions of the accepted roots, for overlap dedup
    std::vector<std::vector<cplx>> psi_cache;

    for (const auto& tuple : tuples) {
        RootSummary rs;
        rs.roots.quantum_numbers.l = tuple;
        {
            int ksum = 0;
            for (int l : tuple) ksum += l;
            rs.momentum = ((ksum % params.N) + params.N) % params.N;
        }
        std::vector<BetheRoots> cands;
        try {
            cands = solve_candidates(BetheQuantumNumbers{tuple}, params, opts,
                                     16, ctxN, ctx1);
        } catch (const Error& e) {
            rs.status = "failed";
            rs.detail = e.what();
        }
        if (cands.empty() && rs.status.empty()) {
            rs.status = "failed";
            rs.detail = "no seed converged for this tuple";
        }
        // Prefer a candidate that is a physical state not yet represented.
        // Identical (energy, p multiset) is the same root; on an energy
        // collision the lattice wavefunction overlap separates gauge copies
        // of the same eigenstate from genuine degenerate partners.
        auto duplicate_of = [&](const BetheRoots& cand,
                                const std::vector<cplx>& psi)
            -> const char* {
            for (size_t pi_ = 0; pi_ < rep.roots.size(); ++pi_) {
                const auto& prev = rep.roots[pi_];
                if (prev.status != "ok") continue;
                const double de = std::abs(prev.roots.energies.E_M -
                                           cand.energies.E_M);
                if (de < 1e-8 && same_p_multiset(prev.roots.p, cand.p, 1e-8))
                    return "same energy and pseudomomentum multiset";
                // the overlap decides; the energy window only prunes
                if (de < 1e-5 &&
                    state_overlap(psi, psi_cache[pi_]) > 1.0 - 1e-6)
                    return "same eigenstate in a different parametrization";
            }
            return nullptr;
        };
        // A tuple may host several distinct physical states; the first new
        // one becomes its main entry and the rest are appended as
        // additional entries.
        const char* dup_reason = nullptr;
        std::vector<RootSummary> accepted;
        std::vector<std::vector<cplx>> accepted_psi;
        for (auto& cand : cands) {
            if (cand.residual_norm >= opts.tol) {
                rs.status = "quarantined";
                rs.detail = "residual above tolerance";
                continue;
            }
            if (!std::isfinite(cand.energies.E_M)) {
                rs.status = "quarantined";
                rs.detail = "non-real spin energy";
                continue;
            }
            RootState st = root_state(cand, ed.basis, ctxN);
            if (st.degenerate) {
                rs.status = "quarantined";
                rs.detail = "degenerate auxiliary parameters";
                continue;
            }
            if (st.null_state) {
                rs.status = "quarantined";
                rs.detail = "null lattice state (symmetrization cancels)";
                continue;
            }
            try {
                // definitive physicality check: the constructed psi must
                // satisfy the lattice equation at its own eigenvalue
                const double lres = lattice_schrodinger_residual(
                    st.psi, ed.basis, cand.energies.calE, params, M);
                if (!(lres <= 1e-4)) {
                    rs.status = "quarantined";
                    rs.detail = "lattice equation violated by psi";
                    continue;
                }
            } catch (const Error&) {
                rs.status = "quarantined";
                rs.detail = "lattice equation check failed";
                continue;
            }
            bool dup = false;
            if (const char* why = duplicate_of(cand, st.psi)) {
                dup_reason = why;
                dup = true;
            }
            for (size_t ai = 0; !dup && ai < accepted.size(); ++ai)
                if (std::abs(accepted[ai].roots.energies.E_M -
                             cand.energies.E_M) < 1e-5 &&
                    state_overlap(st.psi, accepted_psi[ai]) > 1.0 - 1e-6) {
                    dup_reason = "same eigenstate in a different "
                                 "parametrization";
                    dup = true;
                }
            if (dup) continue;
            RootSummary extra;
            extra.roots = std::move(cand);
            extra.status = "ok";
            extra.momentum = rs.momentum;
            if (!accepted.empty())
                extra.detail = "additional state from the same tuple";
            accepted.push_back(std::move(extra));
            accepted_psi.push_back(std::move(st.psi));
        }
        if (accepted.empty()) {
            if (rs.status != "ok" && dup_reason) {
                rs.status = "duplicate";
                rs.detail = dup_reason;
            }
            if (rs.status == "quarantined") ++rep.quarantined;
            if (rs.status == "duplicate") ++rep.duplicates;
            if (rs.status == "failed" || rs.status.empty()) {
                if (rs.status.empty()) {
                    rs.status = "failed";
                    rs.detail = "no admissible candidate";
                }
            }
            rep.roots.push_back(std::move(rs));
            psi_cache.push_back({});
        } else {
            for (size_t ai = 0; ai < accepted.size(); ++ai) {
                ++rep.converged;
                rep.roots.push_back(std::move(accepted[ai]));
                psi_cache.push_back(std::move(accepted_psi[ai]));
            }
        }
    }

    // Second mirror pass: roots found late in the tuple order can seed
    // their reflection partners at tuples that were already processed.
    {
        std::set<std::vector<int>> requested(tuples.begin(), tuples.end());
        const size_t first_round = rep.roots.size();
        for (size_t src = 0; src < first_round; ++src) {
            if (rep.roots[src].status != "ok") continue;
            const auto& base = rep.roots[src].roots;
            // keep the source ordering: (-p, -t, N - l) solves the system
            // exactly with the labels unsorted
            std::vector<int> mirror;
            for (int l : base.quantum_numbers.l)
                mirror.push_back(((params.N - l) % params.N + params.N) %
                                 params.N);
            {
                auto sorted_mirror = mirror;
                std::sort(sorted_mirror.begin(), sorted_mirror.end());
                if (!requested.count(sorted_mirror)) continue;
            }
            {
                std::vector<cplx> u0;
                for (const cplx& x : base.p) u0.push_back(-x);
                for (const cplx& x : base.t) u0.push_back(-x);
                BetheRoots cand;
                try {
                    cand = solve(BetheQuantumNumbers{mirror}, params, opts,
                                 u0);
                } catch (const Error&) {
                    continue;
                }
                if (cand.residual_norm >= opts.tol ||
                    !std::isfinite(cand.energies.E_M))
                    continue;
                RootState st = root_state(cand, ed.basis, ctxN);
                if (st.degenerate || st.null_state) continue;
                try {
                    if (!(lattice_schrodinger_residual(
                              st.psi, ed.basis, cand.energies.calE, params,
                              M) <= 1e-4))
                        continue;
                } catch (const Error&) {
                    continue;
                }
                bool dup = false;
                for (size_t pi_ = 0; pi_ < rep.roots.size() && !dup; ++pi_) {
                    const auto& prev = rep.roots[pi_];
                    if (prev.status != "ok") continue;
                    const double de = std::abs(prev.roots.energies.E_M -
                                               cand.energies.E_M);
                    if (de < 1e-8 &&
                        same_p_multiset(prev.roots.p, cand.p, 1e-8))
                        dup = true;
                    else if (de < 1e-5 &&
                             state_overlap(st.psi, psi_cache[pi_]) >
                                 1.0 - 1e-6)
                        dup = true;
                }
                if (dup) continue;
                RootSummary extra;
                extra.roots = std::move(cand);
                extra.status = "ok";
                extra.detail = "reflection partner found in the mirror pass";
                int ksum = 0;
                for (int l : mirror) ksum += l;
                extra.momentum = ((ksum % params.N) + params.N) % params.N;
                ++rep.converged;
                rep.roots.push_back(std::move(extra));
                psi_cache.push_back(std::move(st.psi));
            }
        }
    }

    // Match each surviving root to the nearest unconsumed highest-weight
    // ED level, preferring one whose momentum label agrees with the root.
    std::vector<bool> consumed(rep.ed_eigenvalues.size(), false);
    for (auto& rs : rep.roots) {
        if (rs.status != "ok") continue;
        int best = -1;
        double bd = match_tol;
        bool best_mom = false;
        for (size_t j = 0; j < rep.ed_eigenvalues.size(); ++j) {
            if (consumed[j] || !rep.ed_highest_weight[j]) continue;
            const double d =
                std::abs(rep.ed_eigenvalues[j] - rs.roots.energies.E_M);
            if (d >= match_tol) continue;
            const bool mom =
                ed.record.momentum_labels[j] == rs.momentum;
            if (best < 0 || (mom && !best_mom) ||
                (mom == best_mom && d < bd)) {
                bd = d;
                best = static_cast<int>(j);
                best_mom = mom;
            }
        }
        if (best >= 0) {
            consumed[size_t(best)] = true;
            rs.matched_level = best;
            rs.deviation = bd;
            rs.ed_level_highest_weight = true;
            rep.max_deviation = std::max(rep.max_deviation, bd);
            ++rep.hw_matched;
        }
    }
    for (size_t j = 0; j < rep.ed_eigenvalues.size(); ++j)
        if (rep.ed_highest_weight[j] && !consumed[j])
            rep.unmatched_hw_levels.push_back(static_cast<int>(j));
    rep.hw_fraction =
        rep.hw_levels ? double(rep.hw_matched) / double(rep.hw_levels) : 1.0;
    return rep;
}

}  // namespace ellspin
