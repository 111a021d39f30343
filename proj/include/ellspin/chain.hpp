#ifndef ELLSPIN_CHAIN_HPP
#define ELLSPIN_CHAIN_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "ellspin/dense.hpp"
#include "ellspin/elliptic.hpp"

namespace ellspin {

struct ModelParams {
    int N = 0;
    double alpha = 0.0;
    double J = 1.0;

    void validate() const {
        if (N < 3) throw Error("model: N must be >= 3");
        if (!(alpha > 0.0)) throw Error("model: alpha must be positive");
    }
};

// Down-spin positions, strictly increasing, sites numbered 1..N.
struct SpinBasisState {
    std::vector<int> sites;

    bool operator<(const SpinBasisState& o) const { return sites < o.sites; }
    bool operator==(const SpinBasisState& o) const { return sites == o.sites; }
};

// All C(N,M) states in lexicographic order.
std::vector<SpinBasisState> sector_basis(int N, int M);

struct SectorHamiltonian {
    int M = 0;
    ModelParams params;
    std::vector<SpinBasisState> basis;
    Matrix matrix;  // real symmetric, dimension C(N,M)
};

// H restricted to the M-down-spin sector.  Matrix element moving one down
// spin from site a to site b is J*h(a-b); the diagonal is -J * sum of h
// over opposite-spin pairs, so the ferromagnetic vacuum sits at 0.
SectorHamiltonian build_hamiltonian(const ModelParams& params, int M);

struct SpectrumRecord {
    int M = 0;
    std::vector<double> eigenvalues;   // ascending
    std::vector<int> momentum_labels;  // mod N, convention T v = e^{-2pi i k/N} v
    std::string provenance;            // "ED" or "Bethe"
    std::vector<double> residuals;     // ||H v - lambda v||_inf per level
};

struct EDResult {
    SpectrumRecord record;
    ModelParams params;
    std::vector<SpinBasisState> basis;
    std::vector<std::vector<cplx>> vectors;  // vectors[j] = eigenvector j
    std::vector<double> raising_norm;        // ||S+ v|| / ||v||
    std::vector<bool> highest_weight;        // raising_norm < 1e-8
};

EDResult diagonalize(const SectorHamiltonian& h, int dimension_cap = 20000);

// Cyclic translation i -> i+1 acting on a sector vector.
std::vector<cplx> translate(const std::vector<cplx>& v,
                            const std::vector<SpinBasisState>& basis, int N);

// Total spin raising operator: maps a sector-M vector to sector M-1,
// (S+ psi)(n') = sum_{s not in n'} psi(n' with s added).
std::vector<cplx> apply_raising(const std::vector<cplx>& v,
                                const std::vector<SpinBasisState>& basis,
                                int N);

// Max-norm residual of the lattice Schrodinger equation for psi at lattice
// eigenvalue calE, normalized by max|psi|.
double lattice_schrodinger_residual(const std::vector<cplx>& psi,
                                    const std::vector<SpinBasisState>& basis,
                                    cplx calE, const ModelParams& params,
                                    int M);
double lattice_schrodinger_residual(
    const std::map<SpinBasisState, cplx>& psi, cplx calE,
    const ModelParams& params, int M);

// Map a lattice eigenvalue calE_M to the spin-chain energy E_M (exact for
// highest-weight states) and back.
double energy_map(cplx calE, const ModelParams& params, int M);
double energy_map(cplx calE, const ModelParams& params, int M,
                  const EllipticContext& ctx_N, const EllipticContext& ctx_1);
cplx energy_map_inverse(double E, const ModelParams& params, int M);

}  // namespace ellspin

#endif
