#include "ellspin/combinatorics.hpp"

#include <algorithm>
#include <numeric>

namespace ellspin {

ColorMap color_map(int M) {
    if (M < 1) throw InvalidM("color_map: M must be >= 1");
    ColorMap cm;
    cm.M = M;
    cm.m = M * (M - 1) / 2;
    if (M == 1) return cm;  // empty map, chi degenerates to a plane wave
    cm.c.resize(static_cast<size_t>(cm.m));
    // Segment S_k: (k-1)(2M-k)/2 + 1 <= j <= k(2M-k-1)/2.
    for (int k = 1; k <= M - 1; ++k) {
        const int lo = (k - 1) * (2 * M - k) / 2 + 1;
        const int hi = k * (2 * M - k - 1) / 2;
        for (int j = lo; j <= hi; ++j) cm.c[static_cast<size_t>(j - 1)] = k;
    }
    return cm;
}

std::int64_t weight(const std::vector<int>& s, const ColorMap& cm) {
    if (static_cast<int>(s.size()) != cm.m)
        throw InvalidM("weight: permutation size does not match m");
    // Exponent vector of the running monomial, starting from x_1^M.  The
    // operator written next to x_1^M acts first, so the chain runs from
    // s(m) down to s(1).
    std::vector<int> expo(static_cast<size_t>(cm.M), 0);
    expo[0] = cm.M;
    std::int64_t coeff = 1;
    for (int step = cm.m - 1; step >= 0; --step) {
        const int col = cm.color(s[static_cast<size_t>(step)]);
        const int e = expo[static_cast<size_t>(col - 1)];
        if (e == 0) return 0;
        coeff *= e;
        expo[static_cast<size_t>(col - 1)] = e - 1;
        expo[static_cast<size_t>(col)] += 1;
    }
    for (int v : expo)
        if (v != 1) return 0;
    return coeff;
}

std::vector<WeightedPermutation> nonzero_permutations(
    const ColorMap& cm, std::int64_t enumeration_cap) {
    std::int64_t fact = 1;
    for (int k = 2; k <= cm.m; ++k) fact *= k;
    if (fact > enumeration_cap)
        throw TooLarge("nonzero_permutations: m! exceeds the enumeration cap");

    std::vector<WeightedPermutation> out;
    if (cm.m == 0) {
        // Trivial permutation of the empty set, weight 1: lets M = 1 flow
        // through the same code path as M >= 2.
        out.push_back(WeightedPermutation{{}, 1});
        return out;
    }
    std::vector<int> s(static_cast<size_t>(cm.m));
    std::iota(s.begin(), s.end(), 1);
    do {
        const std::int64_t w = weight(s, cm);
        if (w != 0) out.push_back(WeightedPermutation{s, w});
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
}

}  // namespace ellspin
