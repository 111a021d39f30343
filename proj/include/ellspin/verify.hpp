#ifndef ELLSPIN_VERIFY_HPP
#define ELLSPIN_VERIFY_HPP

#include <string>
#include <vector>

#include "ellspin/chain.hpp"

namespace ellspin {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The standing invariant suite at one parameter point: elliptic identities,
// ED invariants, root residuals and quasi-periodicity checks.  The
// perturbation flag is a negative control that injects a small defect into
// the Hamiltonian so the checks must fail.
std::vector<CheckResult> run_verification(const ModelParams& params,
                                          bool inject_perturbation = false);

}  // namespace ellspin

#endif
