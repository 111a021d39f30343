#include "ellspin/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ellspin {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

std::map<std::vector<int>, int> index_of(
    const std::vector<SpinBasisState>& basis) {
    std::map<std::vector<int>, int> idx;
    for (int a = 0; a < static_cast<int>(basis.size()); ++a)
        idx[basis[static_cast<size_t>(a)].sites] = a;
    return idx;
}

// wp_N at integer separations 1..N-1 (real on the real axis).
std::vector<double> wp_table(const ModelParams& p) {
    EllipticContext ctx(double(p.N), p.alpha);
    std::vector<double> t(static_cast<size_t>(p.N), 0.0);
    for (int j = 1; j < p.N; ++j)
        t[static_cast<size_t>(j)] = ctx.wp(cplx(double(j), 0.0)).real();
    return t;
}

std::vector<double> h_table(const ModelParams& p) {
    EllipticContext ctx(double(p.N), p.alpha);
    std::vector<double> t(static_cast<size_t>(p.N), 0.0);
    for (int j = 1; j < p.N; ++j) t[static_cast<size_t>(j)] = h_exchange(j, ctx);
    return t;
}

int sep(int a, int b, int N) {
    int d = (a - b) % N;
    if (d < 0) d += N;
    return d;  // 0..N-1
}

}  // namespace

std::vector<SpinBasisState> sector_basis(int N, int M) {
    if (M < 0 || M > N) throw InvalidM("sector_basis: need 0 <= M <= N");
    std::vector<SpinBasisState> basis;
    std::vector<int> comb(static_cast<size_t>(M));
    for (int i = 0; i < M; ++i) comb[static_cast<size_t>(i)] = i + 1;
    if (M == 0) {
        basis.push_back(SpinBasisState{});
        return basis;
    }
    while (true) {
        basis.push_back(SpinBasisState{comb});
        int i = M - 1;
        while (i >= 0 && comb[static_cast<size_t>(i)] == N - (M - 1 - i)) --i;
        if (i < 0) break;
        ++comb[static_cast<size_t>(i)];
        for (int k = i + 1; k < M; ++k)
            comb[static_cast<size_t>(k)] = comb[static_cast<size_t>(k - 1)] + 1;
    }
    return basis;
}

SectorHamiltonian build_hamiltonian(const ModelParams& params, int M) {
    params.validate();
    SectorHamiltonian H;
    H.M = M;
    H.params = params;
    H.basis = sector_basis(params.N, M);
    const int dim = static_cast<int>(H.basis.size());
    H.matrix = Matrix(dim, dim);
    if (M == 0) return H;

    const auto idx = index_of(H.basis);
    const auto h = h_table(params);
    const int N = params.N;
    const double J = params.J;

    for (int a = 0; a < dim; ++a) {
        const auto& n = H.basis[static_cast<size_t>(a)].sites;
        std::vector<bool> occupied(static_cast<size_t>(N + 1), false);
        for (int site : n) occupied[static_cast<size_t>(site)] = true;
        double diag = 0.0;
        for (int beta = 0; beta < M; ++beta) {
            const int from = n[static_cast<size_t>(beta)];
            for (int s = 1; s <= N; ++s) {
                if (occupied[static_cast<size_t>(s)]) continue;
                const double hv = h[static_cast<size_t>(sep(from, s, N))];
                diag -= J * hv;
                std::vector<int> moved = n;
                moved[static_cast<size_t>(beta)] = s;
                std::sort(moved.begin(), moved.end());
                const int b = idx.at(moved);
                H.matrix(b, a) += J * hv;
            }
        }
        H.matrix(a, a) += diag;
    }
    return H;
}

std::vector<cplx> translate(const std::vector<cplx>& v,
                            const std::vector<SpinBasisState>& basis, int N) {
    const auto idx = index_of(basis);
    std::vector<cplx> out(v.size(), cplx(0.0, 0.0));
    for (size_t a = 0; a < basis.size(); ++a) {
        std::vector<int> shifted = basis[a].sites;
        for (int& s : shifted) s = (s % N) + 1;
        std::sort(shifted.begin(), shifted.end());
        out[static_cast<size_t>(idx.at(shifted))] = v[a];
    }
    return out;
}

std::vector<cplx> apply_raising(const std::vector<cplx>& v,
                                const std::vector<SpinBasisState>& basis,
                                int N) {
    if (basis.empty()) throw ZeroVector("apply_raising: empty basis");
    const int M = static_cast<int>(basis[0].sites.size());
    if (M == 0) return {};
    const auto lower = sector_basis(N, M - 1);
    const auto idx = index_of(basis);
    std::vector<cplx> out(lower.size(), cplx(0.0, 0.0));
    for (size_t b = 0; b < lower.size(); ++b) {
        const auto& np = lower[b].sites;
        std::vector<bool> occupied(static_cast<size_t>(N + 1), false);
        for (int site : np) occupied[static_cast<size_t>(site)] = true;
        for (int s = 1; s <= N; ++s) {
            if (occupied[static_cast<size_t>(s)]) continue;
            std::vector<int> up = np;
            up.insert(std::upper_bound(up.begin(), up.end(), s), s);
            out[b] += v[static_cast<size_t>(idx.at(up))];
        }
    }
    return out;
}

namespace {

double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

// Momentum labels inside one degenerate cluster via translation-eigenspace
// projection: P_k = (1/N) sum_r e^{+2pi i k r/N} T^r.
void label_cluster(const std::vector<SpinBasisState>& basis, int N,
                   std::vector<std::vector<cplx>>& vecs,
                   std::vector<int>& labels, int lo, int hi) {
    const int d = hi - lo;
    // Precompute T^r applied to each cluster vector.
    std::vector<std::vector<std::vector<cplx>>> powers(
        static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
        powers[static_cast<size_t>(i)].push_back(
            vecs[static_cast<size_t>(lo + i)]);
        for (int r = 1; r < N; ++r)
            powers[static_cast<size_t>(i)].push_back(translate(
                powers[static_cast<size_t>(i)].back(), basis, N));
    }
    std::vector<std::vector<cplx>> found;
    std::vector<int> found_k;
    for (int k = 0; k < N && static_cast<int>(found.size()) < d; ++k) {
        std::vector<std::vector<cplx>> cand;
        for (int i = 0; i < d; ++i) {
            std::vector<cplx> proj(vecs[static_cast<size_t>(lo)].size(),
                                   cplx(0.0, 0.0));
            for (int r = 0; r < N; ++r) {
                const cplx phase =
                    std::exp(I * (2.0 * pi * double(k) * double(r) / N)) /
                    double(N);
                const auto& tv = powers[static_cast<size_t>(i)]
                                       [static_cast<size_t>(r)];
                for (size_t a = 0; a < proj.size(); ++a)
                    proj[a] += phase * tv[a];
            }
            cand.push_back(std::move(proj));
        }
        // Gram-Schmidt the projections; surviving directions carry label k.
        // Different-k projections are orthogonal already, so only
        // orthogonalize within the current k.
        for (auto& u : cand) {
            for (size_t fi = 0; fi < found.size(); ++fi) {
                if (found_k[fi] != k) continue;
                cplx ip(0.0, 0.0);
                for (size_t a = 0; a < u.size(); ++a)
                    ip += std::conj(found[fi][a]) * u[a];
                for (size_t a = 0; a < u.size(); ++a)
                    u[a] -= ip * found[fi][a];
            }
            const double nn = vec_norm(u);
            if (nn > 1e-6) {
                for (auto& x : u) x /= nn;
                found.push_back(std::move(u));
                found_k.push_back(k);
                if (static_cast<int>(found.size()) == d) break;
            }
        }
    }
    if (static_cast<int>(found.size()) != d)
        throw Error("diagonalize: translation labeling failed on a cluster");
    for (int i = 0; i < d; ++i) {
        vecs[static_cast<size_t>(lo + i)] = found[static_cast<size_t>(i)];
        labels[static_cast<size_t>(lo + i)] = found_k[static_cast<size_t>(i)];
    }
}

}  // namespace

EDResult diagonalize(const SectorHamiltonian& h, int dimension_cap) {
    const int dim = static_cast<int>(h.basis.size());
    if (dim > dimension_cap)
        throw DimensionCap("diagonalize: sector dimension exceeds the cap");

    EDResult res;
    res.params = h.params;
    res.basis = h.basis;
    res.record.M = h.M;
    res.record.provenance = "ED";

    const SymEigenResult eig = sym_eigen(h.matrix);
    res.record.eigenvalues = eig.values;
    res.vectors.resize(static_cast<size_t>(dim));
    for (int j = 0; j < dim; ++j) {
        std::vector<cplx> v(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) v[static_cast<size_t>(i)] = eig.vectors(i, j);
        res.vectors[static_cast<size_t>(j)] = std::move(v);
    }
    res.record.momentum_labels.assign(static_cast<size_t>(dim), 0);

    // Degenerate clusters share translation eigenspaces.
    double scale = 1.0;
    for (double e : eig.values) scale = std::max(scale, std::abs(e));
    const double cluster_tol = 1e-8 * scale;
    int lo = 0;
    while (lo < dim) {
        int hi = lo + 1;
        while (hi < dim && eig.values[static_cast<size_t>(hi)] -
                                   eig.values[static_cast<size_t>(hi - 1)] <
                               cluster_tol)
            ++hi;
        label_cluster(h.basis, h.params.N, res.vectors,
                      res.record.momentum_labels, lo, hi);
        lo = hi;
    }

    // Residuals and highest-weight flags.
    res.record.residuals.assign(static_cast<size_t>(dim), 0.0);
    res.raising_norm.assign(static_cast<size_t>(dim), 0.0);
    res.highest_weight.assign(static_cast<size_t>(dim), false);
    for (int j = 0; j < dim; ++j) {
        const auto& v = res.vectors[static_cast<size_t>(j)];
        double r = 0.0;
        for (int i = 0; i < dim; ++i) {
            cplx acc = -eig.values[static_cast<size_t>(j)] *
                       v[static_cast<size_t>(i)];
            for (int kk = 0; kk < dim; ++kk)
                acc += h.matrix(i, kk) * v[static_cast<size_t>(kk)];
            r = std::max(r, std::abs(acc));
        }
        res.record.residuals[static_cast<size_t>(j)] = r;
        if (h.M > 0) {
            const auto up = apply_raising(v, h.basis, h.params.N);
            const double rn = vec_norm(up) / vec_norm(v);
            res.raising_norm[static_cast<size_t>(j)] = rn;
            res.highest_weight[static_cast<size_t>(j)] = rn < 1e-8;
        } else {
            res.highest_weight[static_cast<size_t>(j)] = true;
        }
    }
    return res;
}

double lattice_schrodinger_residual(const std::vector<cplx>& psi,
                                    const std::vector<SpinBasisState>& basis,
                                    cplx calE, const ModelParams& params,
                                    int M) {
    double amax = 0.0;
    for (const cplx& x : psi) amax = std::max(amax, std::abs(x));
    if (amax == 0.0)
        throw ZeroVector("lattice_schrodinger_residual: psi is zero");

    const auto idx = index_of(basis);
    const auto wp = wp_table(params);
    const int N = params.N;
    double worst = 0.0;
    for (size_t a = 0; a < basis.size(); ++a) {
        const auto& n = basis[a].sites;
        std::vector<bool> occupied(static_cast<size_t>(N + 1), false);
        for (int site : n) occupied[static_cast<size_t>(site)] = true;
        cplx lhs = 0.0;
        for (int beta = 0; beta < M; ++beta) {
            const int from = n[static_cast<size_t>(beta)];
            for (int s = 1; s <= N; ++s) {
                if (occupied[static_cast<size_t>(s)]) continue;
                std::vector<int> moved = n;
                moved[static_cast<size_t>(beta)] = s;
                std::sort(moved.begin(), moved.end());
                lhs += wp[static_cast<size_t>(sep(from, s, N))] *
                       psi[static_cast<size_t>(idx.at(moved))];
            }
        }
        double pot = 0.0;
        for (int b = 0; b < M; ++b)
            for (int g = 0; g < M; ++g)
                if (b != g)
                    pot += wp[static_cast<size_t>(sep(
                        n[static_cast<size_t>(b)], n[static_cast<size_t>(g)],
                        N))];
        lhs += (pot - calE) * psi[a];
        worst = std::max(worst, std::abs(lhs));
    }
    return worst / amax;
}

double lattice_schrodinger_residual(
    const std::map<SpinBasisState, cplx>& psi, cplx calE,
    const ModelParams& params, int M) {
    const auto basis = sector_basis(params.N, M);
    std::vector<cplx> v(basis.size(), cplx(0.0, 0.0));
    for (size_t a = 0; a < basis.size(); ++a) {
        const auto it = psi.find(basis[a]);
        if (it != psi.end()) v[a] = it->second;
    }
    return lattice_schrodinger_residual(v, basis, calE, params, M);
}

double energy_map(cplx calE, const ModelParams& params, int M,
                  const EllipticContext& ctx_N,
                  const EllipticContext& ctx_1) {
    const cplx omega = ctx_N.torus().omega2;
    const cplx pref = (omega / pi) * std::sin(pi / omega);
    const cplx shift = (2.0 / omega) * (double(M) * double(M - 1) * ctx_N.eta2() -
                                        double(M) * ctx_1.eta2());
    const cplx E = params.J * pref * pref * (calE + shift);
    if (std::abs(E.imag()) > 1e-9 * std::max(1.0, std::abs(E.real())))
        throw NonRealEnergy("energy_map: non-real energy");
    return E.real();
}

double energy_map(cplx calE, const ModelParams& params, int M) {
    EllipticContext ctx_N(double(params.N), params.alpha);
    EllipticContext ctx_1(1.0, params.alpha);
    return energy_map(calE, params, M, ctx_N, ctx_1);
}

cplx energy_map_inverse(double E, const ModelParams& params, int M) {
    EllipticContext ctx_N(double(params.N), params.alpha);
    EllipticContext ctx_1(1.0, params.alpha);
    const cplx omega = ctx_N.torus().omega2;
    const cplx pref = (omega / pi) * std::sin(pi / omega);
    const cplx shift = (2.0 / omega) * (double(M) * double(M - 1) * ctx_N.eta2() -
                                        double(M) * ctx_1.eta2());
    return E / (params.J * pref * pref) - shift;
}

}  // namespace ellspin
