#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "ellspin/combinatorics.hpp"

using namespace ellspin;

namespace {

// Full multivariate-polynomial oracle: apply the operator chain to the
// entire polynomial (not one monomial) and read off the x_1...x_M
// coefficient.
using Poly = std::map<std::vector<int>, std::int64_t>;

Poly apply_op(const Poly& p, int col, int nvars) {
    Poly out;
    for (const auto& [expo, coef] : p) {
        const int e = expo[static_cast<size_t>(col - 1)];
        if (e == 0) continue;
        std::vector<int> ne = expo;
        ne[static_cast<size_t>(col - 1)] -= 1;
        ne[static_cast<size_t>(col)] += 1;
        out[ne] += coef * e;
        (void)nvars;
    }
    return out;
}

std::int64_t weight_oracle(const std::vector<int>& s, const ColorMap& cm) {
    Poly p;
    std::vector<int> start(static_cast<size_t>(cm.M), 0);
    start[0] = cm.M;
    p[start] = 1;
    for (int j = cm.m - 1; j >= 0; --j)
        p = apply_op(p, cm.color(s[static_cast<size_t>(j)]), cm.M);
    const std::vector<int> target(static_cast<size_t>(cm.M), 1);
    const auto it = p.find(target);
    return it == p.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("color map small cases") {
    const ColorMap c2 = color_map(2);
    CHECK(c2.m == 1);
    CHECK(c2.c == std::vector<int>{1});

    const ColorMap c3 = color_map(3);
    CHECK(c3.m == 3);
    CHECK(c3.c == std::vector<int>{1, 1, 2});

    const ColorMap c4 = color_map(4);
    CHECK(c4.m == 6);
    CHECK(c4.c == std::vector<int>{1, 1, 1, 2, 2, 3});

    CHECK(color_map(1).m == 0);
    CHECK_THROWS_AS(color_map(0), InvalidM);
}

TEST_CASE("color map fibers and monotonicity, M = 2..5") {
    for (int M = 2; M <= 5; ++M) {
        const ColorMap cm = color_map(M);
        CHECK(std::is_sorted(cm.c.begin(), cm.c.end()));
        for (int j = 1; j <= M - 1; ++j) {
            const auto count = std::count(cm.c.begin(), cm.c.end(), j);
            CHECK(count == M - j);
        }
    }
}

TEST_CASE("weight of the reversal permutation is the factorial product") {
    for (int M = 2; M <= 5; ++M) {
        const ColorMap cm = color_map(M);
        std::vector<int> s0(static_cast<size_t>(cm.m));
        for (int j = 1; j <= cm.m; ++j)
            s0[static_cast<size_t>(j - 1)] = cm.m + 1 - j;
        std::int64_t expect = 1;
        for (int k = 2; k <= M; ++k) {
            std::int64_t f = 1;
            for (int i = 2; i <= k; ++i) f *= i;
            expect *= f;
        }
        CHECK(weight(s0, cm) == expect);
    }
}

TEST_CASE("M=2 single permutation has weight 2") {
    const ColorMap cm = color_map(2);
    CHECK(weight({1}, cm) == 2);
    const auto perms = nonzero_permutations(cm);
    REQUIRE(perms.size() == 1);
    CHECK(perms[0].weight == 2);
}

TEST_CASE("weights agree with the polynomial-expansion oracle") {
    for (int M : {3, 4}) {
        const ColorMap cm = color_map(M);
        std::vector<int> s(static_cast<size_t>(cm.m));
        std::iota(s.begin(), s.end(), 1);
        int checked = 0, nonzero = 0;
        do {
            const auto w = weight(s, cm);
            CHECK(w == weight_oracle(s, cm));
            if (w != 0) ++nonzero;
            ++checked;
        } while (std::next_permutation(s.begin(), s.end()));
        CHECK(checked == (M == 3 ? 6 : 720));
        const auto perms = nonzero_permutations(cm);
        CHECK(static_cast<int>(perms.size()) == nonzero);
        for (const auto& wp : perms) CHECK(wp.weight != 0);
    }
}

TEST_CASE("M=1 degenerates to the single empty permutation") {
    const auto perms = nonzero_permutations(color_map(1));
    REQUIRE(perms.size() == 1);
    CHECK(perms[0].weight == 1);
    CHECK(perms[0].s.empty());
}

TEST_CASE("enumeration cap") {
    const ColorMap cm = color_map(5);  // m = 10
    CHECK_THROWS_AS(nonzero_permutations(cm, 1000), TooLarge);
}
