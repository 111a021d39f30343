#include "ellspin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ellspin/bethe.hpp"
#include "ellspin/wavefunction.hpp"

namespace ellspin {

namespace {
constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}
}  // namespace

std::vector<CheckResult> run_verification(const ModelParams& params,
                                          bool inject_perturbation) {
    params.validate();
    std::vector<CheckResult> out;
    auto add = [&](const std::string& name, bool pass,
                   const std::string& detail) {
        out.push_back(CheckResult{name, pass, detail});
    };

    EllipticContext ctxN(double(params.N), params.alpha);
    EllipticContext ctx1(1.0, params.alpha);

    {  // Legendre relation on both tori
        double worst = 0.0;
        for (const EllipticContext* c : {&ctxN, &ctx1})
            worst = std::max(worst,
                             std::abs(c->eta1() * c->torus().omega2 -
                                      c->eta2() * c->torus().omega1 - I * pi));
        add("legendre_relation", worst < 1e-10, fmt(worst));
    }
    {  // zeta' = -wp by central differences
        const double h = 1e-5;
        double worst = 0.0;
        for (cplx z : {cplx(0.31, 0.17), cplx(1.23, -0.29), cplx(0.57, 0.33)}) {
            const cplx zz(z.real() * params.N / 4.0,
                          z.imag() * params.alpha / 2.0);
            const cplx fd = (ctxN.wzeta(zz + h) - ctxN.wzeta(zz - h)) / (2 * h);
            worst = std::max(worst, std::abs(fd + ctxN.wp(zz)) /
                                        (1.0 + std::abs(ctxN.wp(zz))));
        }
        add("zeta_derivative_is_minus_wp", worst < 1e-7, fmt(worst));
    }
    {  // tilde sigma quasi-periodicity
        const cplx w(0.8 * params.N / 6.0, 0.1), t(0.3, 0.05);
        const cplx base = tilde_sigma(w, t, ctxN);
        const cplx omega = ctxN.torus().omega2;
        const double r1 =
            std::abs(tilde_sigma(w + double(params.N), t, ctxN) - base) /
            std::abs(base);
        const double r2 =
            std::abs(tilde_sigma(w + omega, t, ctxN) *
                         std::exp(-2.0 * pi * I * t / double(params.N)) -
                     base) /
            std::abs(base);
        add("tilde_sigma_quasi_periodicity", std::max(r1, r2) < 1e-10,
            fmt(std::max(r1, r2)));
    }
    {  // exchange symmetry and realness
        double worst = 0.0;
        for (int j = 1; j < params.N; ++j)
            worst = std::max(worst, std::abs(h_exchange(j, ctxN) -
                                             h_exchange(params.N - j, ctxN)));
        add("exchange_symmetry", worst < 1e-12, fmt(worst));
    }

    // ED invariants, with the optional injected defect
    const int M_ed = std::min(2, params.N / 2);
    auto H = build_hamiltonian(params, M_ed);
    if (inject_perturbation && H.matrix.rows() > 1) H.matrix(0, 1) += 1e-6;
    {
        double asym = 0.0;
        for (int i = 0; i < H.matrix.rows(); ++i)
            for (int j = i + 1; j < H.matrix.cols(); ++j)
                asym = std::max(asym,
                                std::abs(H.matrix(i, j) - H.matrix(j, i)));
        add("hamiltonian_symmetric", asym < 1e-12, fmt(asym));
    }
    {
        // translation commutation through a deterministic probe vector
        const int dim = H.matrix.rows();
        std::vector<cplx> v(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i)
            v[size_t(i)] = cplx(std::sin(0.7 * i + 0.3), std::cos(1.1 * i));
        auto matvec = [&](const std::vector<cplx>& x) {
            std::vector<cplx> y(x.size(), cplx(0, 0));
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    y[size_t(i)] += H.matrix(i, j) * x[size_t(j)];
            return y;
        };
        const auto a = translate(matvec(v), H.basis, params.N);
        const auto b = matvec(translate(v, H.basis, params.N));
        double worst = 0.0;
        for (size_t i = 0; i < a.size(); ++i)
            worst = std::max(worst, std::abs(a[i] - b[i]));
        add("translation_commutes", worst < 1e-10, fmt(worst));
    }
    {
        // non-positivity and descendant inclusion
        std::vector<double> prev;
        bool ok = true;
        double worst = 0.0;
        for (int M = 0; M <= M_ed; ++M) {
            auto Hm = build_hamiltonian(params, M);
            if (inject_perturbation && Hm.matrix.rows() > 1)
                Hm.matrix(0, 1) += 1e-6;
            const auto ed = diagonalize(Hm);
            for (double e : ed.record.eigenvalues)
                if (params.J > 0) worst = std::max(worst, e);
            if (M > 0) {
                std::vector<bool> used(ed.record.eigenvalues.size(), false);
                for (double e : prev) {
                    bool hit = false;
                    for (size_t i = 0; i < ed.record.eigenvalues.size(); ++i)
                        if (!used[i] &&
                            std::abs(ed.record.eigenvalues[i] - e) < 1e-9) {
                            used[i] = true;
                            hit = true;
                            break;
                        }
                    ok = ok && hit;
                }
            }
            prev = ed.record.eigenvalues;
        }
        add("spectrum_nonpositive", worst < 1e-9, fmt(worst));
        add("descendant_inclusion", ok, ok ? "sub-multiset" : "violated");
    }
    {
        // one-magnon two-route equivalence
        const auto ed = diagonalize(build_hamiltonian(params, 1));
        double worst = 0.0;
        for (int l = 1; l < params.N; ++l) {
            try {
                const auto r = solve(BetheQuantumNumbers{{l}}, params);
                double best = 1e9;
                for (double e : ed.record.eigenvalues)
                    best = std::min(best, std::abs(e - r.energies.E_M));
                worst = std::max(worst, best);
            } catch (const Error&) {
                worst = 1e9;
            }
        }
        add("one_magnon_two_route", worst < 1e-8, fmt(worst));
    }
    if (params.N >= 5) {
        // one solved two-magnon root: residual, lattice equation, Bloch q
        try {
            const auto r =
                solve(BetheQuantumNumbers{{1, 3 % params.N}}, params);
            const bool res_ok = r.residual_norm < 1e-10;
            const auto basis = sector_basis(params.N, 2);
            const auto ansatz = make_lattice_ansatz(
                make_chi_parameters(r.p, r.t, ctxN), r.quantum_numbers.l);
            const auto psi = psi_vector(basis, ansatz);
            const double lres = lattice_schrodinger_residual(
                psi, basis, r.energies.calE, params, 2);
            const auto cp = make_chi_parameters(r.p, r.t, ctxN);
            const std::vector<cplx> x0{cplx(0.32, 0.12), cplx(1.73, -0.21)};
            double qdev = 0.0;
            for (int beta = 1; beta <= 2; ++beta) {
                const cplx qe = extract_bloch_q(cp, beta, x0);
                cplx d = qe - r.q[size_t(beta - 1)];
                d -= std::round(d.real());
                qdev = std::max(qdev, std::abs(d));
            }
            add("two_magnon_root_residual", res_ok, fmt(r.residual_norm));
            add("two_magnon_lattice_equation", lres < 1e-7, fmt(lres));
            add("two_magnon_bloch_factor", qdev < 1e-6, fmt(qdev));
        } catch (const Error& e) {
            add("two_magnon_root_residual", false, e.what());
        }
    }
    return out;
}

}  // namespace ellspin
