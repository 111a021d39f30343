#ifndef ELLSPIN_WAVEFUNCTION_HPP
#define ELLSPIN_WAVEFUNCTION_HPP

#include <complex>
#include <vector>

#include "ellspin/chain.hpp"
#include "ellspin/combinatorics.hpp"
#include "ellspin/elliptic.hpp"

namespace ellspin {

// Parameters of the continuum chi function: M pseudomomenta, m auxiliary
// parameters, the color map, and the T_N evaluation context.  The nonzero
// permutations of the weighted sum are cached at construction.
struct ChiParameters {
    std::vector<cplx> p;
    std::vector<cplx> t;
    ColorMap cm;
    const EllipticContext* ctx = nullptr;
    std::vector<WeightedPermutation> perms;

    int magnons() const { return static_cast<int>(p.size()); }
};

ChiParameters make_chi_parameters(std::vector<cplx> p, std::vector<cplx> t,
                                  const EllipticContext& ctx);

// The weighted permutation sum; for M = 1 reduces to exp(i p_1 x_1).
cplx chi(const std::vector<cplx>& x, const ChiParameters& params);

// Bloch factor of the omega shift in coordinate beta (1-based):
// q_beta = (log chi(x0 + omega e_beta) - log chi(x0) - i p_beta omega)
//          / (2 pi i),
// branch fixed by continuity along `path_points` subdivisions, real part
// reduced to [0, 1).
cplx extract_bloch_q(const ChiParameters& params, int beta,
                     const std::vector<cplx>& x0, int path_points = 8);

// q_beta = (sum_{c(l)=beta} t_l - sum_{c(l)=beta-1} t_l)/N; the missing
// colors 0 and M make the boundary sums empty automatically.
std::vector<cplx> q_from_t(const std::vector<cplx>& t, const ColorMap& cm,
                           int N);

struct LatticeAnsatz {
    ChiParameters chi_params;
    std::vector<int> l_ints;
    std::vector<cplx> p_tilde;  // p_nu - 2 pi l_nu / N
};

LatticeAnsatz make_lattice_ansatz(ChiParameters chi_params,
                                  std::vector<int> l_ints);

// psi(n) = sum_{P} exp(-i sum_nu ptilde_nu n_{P nu}) chi(n_P): completely
// symmetric by construction.  Integer configurations that land on a
// cancelling pole of individual permutation terms are evaluated by a small
// circle average in a generic complex direction.
cplx psi_lattice(const SpinBasisState& n, const LatticeAnsatz& ansatz);

// The same symmetrized sum at arbitrary complex coordinates.
cplx psi_ansatz(const std::vector<cplx>& z, const LatticeAnsatz& ansatz);

// psi together with the sum of the magnitudes of its permutation terms;
// the ratio exposes configurations where the symmetrization cancels.
std::pair<cplx, double> psi_lattice_with_scale(const SpinBasisState& n,
                                               const LatticeAnsatz& ansatz);

// psi over a whole sector basis.
std::vector<cplx> psi_vector(const std::vector<SpinBasisState>& basis,
                             const LatticeAnsatz& ansatz);

// |(-1/2 sum d^2/dx^2 + sum wp - E) chi| / |chi| at x0, second derivatives
// by central differences of step h_step.
double continuum_residual(const ChiParameters& params, cplx E_sf,
                          const std::vector<cplx>& x0, double h_step);

}  // namespace ellspin

#endif
