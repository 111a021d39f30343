#include "ellspin/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellspin {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);
}  // namespace

ChiParameters make_chi_parameters(std::vector<cplx> p, std::vector<cplx> t,
                                  const EllipticContext& ctx) {
    ChiParameters cp;
    cp.cm = color_map(static_cast<int>(p.size()));
    if (static_cast<int>(t.size()) != cp.cm.m)
        throw InvalidM("chi parameters: t size must be M(M-1)/2");
    cp.p = std::move(p);
    cp.t = std::move(t);
    cp.ctx = &ctx;
    cp.perms = nonzero_permutations(cp.cm);
    // same-color parameters feed rho/sigma differences: keep them apart
    for (int j = 1; j <= cp.cm.m; ++j)
        for (int l = j + 1; l <= cp.cm.m; ++l)
            if (cp.cm.color(j) == cp.cm.color(l) &&
                ctx.lattice_distance(cp.t[size_t(j - 1)] -
                                     cp.t[size_t(l - 1)]) < 1e-6)
                throw DegenerateT("chi parameters: same-color t collision");
    return cp;
}

cplx chi(const std::vector<cplx>& x, const ChiParameters& params) {
    const int M = params.magnons();
    if (static_cast<int>(x.size()) != M)
        throw InvalidM("chi: coordinate count must equal M");
    cplx phase = 0.0;
    for (int b = 0; b < M; ++b) phase += params.p[size_t(b)] * x[size_t(b)];
    const cplx pref = std::exp(I * phase);
    if (M == 1) return pref;

    const EllipticContext& ctx = *params.ctx;
    const int m = params.cm.m;
    cplx total = 0.0;
    for (const auto& wp : params.perms) {
        cplx w = 0.0;
        cplx prod = double(wp.weight);
        for (int j = 0; j < m; ++j) {
            const int sj = wp.s[size_t(j)];
            const int col = params.cm.color(sj);
            w += x[size_t(col - 1)] - x[size_t(col)];
            if (ctx.lattice_distance(w) < EllipticContext::pole_guard)
                throw PoleProximity("chi: sigma subscript hit the lattice");
            const cplx arg = (j < m - 1)
                                 ? params.t[size_t(sj - 1)] -
                                       params.t[size_t(wp.s[size_t(j + 1)] - 1)]
                                 : params.t[size_t(sj - 1)];
            if (ctx.lattice_distance(arg) < EllipticContext::pole_guard)
                throw DegenerateT("chi: sigma argument hit the lattice");
            prod *= tilde_sigma(w, arg, ctx);
        }
        total += prod;
    }
    return pref * total;
}

cplx extract_bloch_q(const ChiParameters& params, int beta,
                     const std::vector<cplx>& x0, int path_points) {
    const int M = params.magnons();
    if (beta < 1 || beta > M) throw InvalidM("extract_bloch_q: bad beta");
    const cplx omega = params.ctx->torus().omega2;

    std::vector<cplx> x = x0;
    cplx prev = chi(x, params);
    if (std::abs(prev) == 0.0)
        throw ZeroVector("extract_bloch_q: chi vanishes at the base point");
    cplx log_total = 0.0;
    for (int step = 1; step <= path_points; ++step) {
        x[size_t(beta - 1)] =
            x0[size_t(beta - 1)] + omega * double(step) / double(path_points);
        const cplx cur = chi(x, params);
        const cplx ratio = cur / prev;
        if (std::abs(std::arg(ratio)) > 3.0)
            throw BranchAmbiguity(
                "extract_bloch_q: phase jump beyond the unwinding bound");
        log_total += std::log(ratio);
        prev = cur;
    }
    cplx q = (log_total - I * params.p[size_t(beta - 1)] * omega) /
             (2.0 * pi * I);
    const double shift = std::floor(q.real());
    return q - shift;
}

std::vector<cplx> q_from_t(const std::vector<cplx>& t, const ColorMap& cm,
                           int N) {
    std::vector<cplx> q(static_cast<size_t>(cm.M), cplx(0.0, 0.0));
    for (int beta = 1; beta <= cm.M; ++beta) {
        cplx s = 0.0;
        for (int l = 1; l <= cm.m; ++l) {
            if (cm.color(l) == beta) s += t[size_t(l - 1)];
            if (cm.color(l) == beta - 1) s -= t[size_t(l - 1)];
        }
        q[size_t(beta - 1)] = s / double(N);
    }
    return q;
}

LatticeAnsatz make_lattice_ansatz(ChiParameters chi_params,
                                  std::vector<int> l_ints) {
    const int M = chi_params.magnons();
    if (static_cast<int>(l_ints.size()) != M)
        throw InvalidM("lattice ansatz: l count must equal M");
    LatticeAnsatz a;
    const double N = chi_params.ctx->period();
    a.p_tilde.resize(static_cast<size_t>(M));
    for (int nu = 0; nu < M; ++nu)
        a.p_tilde[size_t(nu)] =
            chi_params.p[size_t(nu)] - 2.0 * pi * double(l_ints[size_t(nu)]) / N;
    a.chi_params = std::move(chi_params);
    a.l_ints = std::move(l_ints);
    return a;
}

namespace {

// Symmetrized ansatz at arbitrary complex coordinates; `scale` collects
// the sum of the term magnitudes.
cplx psi_complex(const std::vector<cplx>& z, const LatticeAnsatz& ansatz,
                 double* scale = nullptr) {
    const int M = ansatz.chi_params.magnons();
    std::vector<int> perm(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) perm[size_t(i)] = i;
    cplx total = 0.0;
    if (scale) *scale = 0.0;
    std::vector<cplx> y(static_cast<size_t>(M));
    do {
        cplx phase = 0.0;
        for (int nu = 0; nu < M; ++nu) {
            y[size_t(nu)] = z[size_t(perm[size_t(nu)])];
            phase += ansatz.p_tilde[size_t(nu)] * y[size_t(nu)];
        }
        const cplx term = std::exp(-I * phase) * chi(y, ansatz.chi_params);
        if (scale) *scale += std::abs(term);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace

cplx psi_ansatz(const std::vector<cplx>& z, const LatticeAnsatz& ansatz) {
    return psi_complex(z, ansatz);
}

std::pair<cplx, double> psi_lattice_with_scale(const SpinBasisState& n,
                                               const LatticeAnsatz& ansatz) {
    const int M = ansatz.chi_params.magnons();
    if (static_cast<int>(n.sites.size()) != M)
        throw InvalidM("psi_lattice: state has the wrong magnon count");
    std::vector<cplx> z(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) z[size_t(i)] = double(n.sites[size_t(i)]);
    double scale = 0.0;
    try {
        const cplx v = psi_complex(z, ansatz, &scale);
        return {v, scale};
    } catch (const PoleProximity&) {
        // Individual permutation terms have a cancelling pole exactly at
        // this integer configuration.  psi itself is analytic here, so a
        // four-point circle average in a generic direction recovers it with
        // O(delta^4) bias.
        const double delta = 1e-3;
        cplx acc = 0.0;
        double sc = 0.0;
        for (int quarter = 0; quarter < 4; ++quarter) {
            const cplx rot =
                delta * std::exp(I * (pi / 2.0) * double(quarter));
            std::vector<cplx> zs(static_cast<size_t>(M));
            for (int i = 0; i < M; ++i)
                zs[size_t(i)] =
                    z[size_t(i)] + rot * std::exp(I * (0.39 + 1.07 * i));
            double s1 = 0.0;
            acc += psi_complex(zs, ansatz, &s1);
            sc = std::max(sc, s1);
        }
        return {acc / 4.0, sc};
    }
}

cplx psi_lattice(const SpinBasisState& n, const LatticeAnsatz& ansatz) {
    return psi_lattice_with_scale(n, ansatz).first;
}

std::vector<cplx> psi_vector(const std::vector<SpinBasisState>& basis,
                             const LatticeAnsatz& ansatz) {
    std::vector<cplx> v(basis.size());
    for (size_t a = 0; a < basis.size(); ++a)
        v[a] = psi_lattice(basis[a], ansatz);
    return v;
}

double continuum_residual(const ChiParameters& params, cplx E_sf,
                          const std::vector<cplx>& x0, double h_step) {
    if (!(h_step >= 1e-5 && h_step <= 1e-2))
        throw Error("continuum_residual: h_step outside [1e-5, 1e-2]");
    const int M = params.magnons();
    const cplx chi0 = chi(x0, params);
    if (std::abs(chi0) == 0.0)
        throw ZeroVector("continuum_residual: chi vanishes at x0");

    cplx acc = 0.0;
    std::vector<cplx> x = x0;
    for (int b = 0; b < M; ++b) {
        x[size_t(b)] = x0[size_t(b)] + h_step;
        const cplx up = chi(x, params);
        x[size_t(b)] = x0[size_t(b)] - h_step;
        const cplx dn = chi(x, params);
        x[size_t(b)] = x0[size_t(b)];
        acc += -0.5 * (up - 2.0 * chi0 + dn) / (h_step * h_step);
    }
    cplx pot = 0.0;
    for (int b = 0; b < M; ++b)
        for (int g = 0; g < M; ++g)
            if (b != g) pot += params.ctx->wp(x0[size_t(b)] - x0[size_t(g)]);
    const cplx r = acc + (pot - E_sf) * chi0;
    return std::abs(r) / std::abs(chi0);
}

}  // namespace ellspin
