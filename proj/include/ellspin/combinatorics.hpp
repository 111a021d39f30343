#ifndef ELLSPIN_COMBINATORICS_HPP
#define ELLSPIN_COMBINATORICS_HPP

#include <cstdint>
#include <vector>

#include "ellspin/errors.hpp"

namespace ellspin {

// Color function c : {1..m} -> {1..M-1}, m = M(M-1)/2, non-decreasing,
// with fiber sizes |c^{-1}(j)| = M - j.  Stored 0-based; color(j) returns
// the 1-based color of the 1-based index j.
struct ColorMap {
    int M = 0;
    int m = 0;
    std::vector<int> c;  // c[j-1] = color of index j, in 1..M-1

    int color(int j) const { return c[static_cast<size_t>(j - 1)]; }
};

struct WeightedPermutation {
    std::vector<int> s;  // permutation of {1..m}, 1-based values
    std::int64_t weight = 0;
};

// Build the color map for M magnons (M >= 2; M == 1 gives the empty map).
ColorMap color_map(int M);

// Weight l(s): apply x_{c(s(1))+1} d/dx_{c(s(1))} ... to x_1^M and read the
// coefficient of x_1...x_M.  Exact integer arithmetic on a single monomial.
std::int64_t weight(const std::vector<int>& s, const ColorMap& cm);

// All permutations of {1..m} with nonzero weight.  Exhaustive enumeration,
// guarded by a cap on m!.
std::vector<WeightedPermutation> nonzero_permutations(
    const ColorMap& cm, std::int64_t enumeration_cap = 3628800 /* 10! */);

}  // namespace ellspin

#endif
