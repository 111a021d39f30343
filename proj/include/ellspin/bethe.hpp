#ifndef ELLSPIN_BETHE_HPP
#define ELLSPIN_BETHE_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ellspin/chain.hpp"
#include "ellspin/combinatorics.hpp"
#include "ellspin/elliptic.hpp"

namespace ellspin {

struct BetheQuantumNumbers {
    std::vector<int> l;  // one integer branch label per magnon
};

struct BetheEnergies {
    cplx E_sf{0.0, 0.0};  // continuum M-particle eigenvalue
    cplx calE{0.0, 0.0};  // lattice eigenvalue
    double E_M = 0.0;     // spin-chain energy
};

struct BetheRoots {
    BetheQuantumNumbers quantum_numbers;
    std::vector<cplx> p, t;
    std::vector<cplx> q, q_tilde, f, eps;
    BetheEnergies energies;
    double residual_norm = 0.0;  // inf-norm of the stacked real system
    int iterations = 0;
    bool converged = false;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 80;
    double jacobian_step = 1e-6;
    double alpha_start = 8.0;     // continuation anchor
    int continuation_steps = 12;  // geometric steps from alpha_start down
    int max_seeds = 64;           // multistart cap per tuple
};

// Residuals of the auxiliary-parameter relations, one per parameter.
std::vector<cplx> t_residual(const std::vector<cplx>& t,
                             const std::vector<cplx>& p, const ColorMap& cm,
                             const EllipticContext& ctx_N);

// f and epsilon on the unit torus: f = 2 q~ zeta_1(1/2) - zeta_1(q~),
// eps = wp_1(q~)/2.
std::pair<cplx, cplx> f_eps(cplx q_tilde, const EllipticContext& ctx_1);

// Pseudomomentum closure residuals f(q~_beta) + i p~_beta.
std::vector<cplx> p_closure_residual(const BetheRoots& roots,
                                     const ModelParams& params,
                                     const EllipticContext& ctx_1);

// Damped Newton on the stacked system (p, t) at fixed quantum numbers.
// Without `init`, multistart seeding plus geometric alpha continuation from
// the trigonometric corner is used.
BetheRoots solve(const BetheQuantumNumbers& qn, const ModelParams& params,
                 const SolveOptions& opts = {},
                 const std::optional<std::vector<cplx>>& init = std::nullopt);

// Fill in E_sf (continuum), calE (lattice) and E_M (spin chain).
BetheEnergies energy(BetheRoots& roots, const ModelParams& params);

struct RootSummary {
    BetheRoots roots;
    std::string status;       // "ok", "duplicate", "quarantined", "failed"
    std::string detail;       // failure or quarantine reason
    int momentum = 0;         // sum of quantum numbers mod N
    int matched_level = -1;   // index into the ED spectrum, -1 if unmatched
    double deviation = 0.0;   // |E_Bethe - E_ED| when matched
    bool ed_level_highest_weight = false;
};

struct MatchReport {
    ModelParams params;
    int M = 0;
    std::vector<int> l_range;
    int tuples_attempted = 0;
    int converged = 0;
    int quarantined = 0;
    int duplicates = 0;
    std::vector<RootSummary> roots;  // one entry per attempted tuple
    // ED reference info
    std::vector<double> ed_eigenvalues;
    std::vector<bool> ed_highest_weight;
    int hw_levels = 0;
    int hw_matched = 0;
    double hw_fraction = 0.0;
    double max_deviation = 0.0;
    std::vector<int> unmatched_hw_levels;
};

// Scan quantum-number tuples, solve, deduplicate, and match the surviving
// roots against the highest-weight levels of the ED spectrum.
MatchReport enumerate_and_match(const ModelParams& params, int M,
                                const std::vector<int>& l_range,
                                const EDResult& ed,
                                double match_tol = 1e-6,
                                const SolveOptions& opts = {});

// Non-decreasing tuples over the range (the default enumeration order).
std::vector<std::vector<int>> nondecreasing_tuples(
    const std::vector<int>& range, int M);

}  // namespace ellspin

#endif
