#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ellspin/elliptic.hpp"
#include "oracles.hpp"

using namespace ellspin;
using oracles::LatticeOracle;

namespace {
constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

// Random off-lattice points in the fundamental cell.
std::vector<cplx> random_points(const EllipticContext& ctx, int count,
                                double min_dist, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(-0.45, 0.45);
    std::vector<cplx> pts;
    while (static_cast<int>(pts.size()) < count) {
        const cplx z(ur(rng) * ctx.period(), ur(rng) * ctx.alpha());
        if (ctx.lattice_distance(z) > min_dist) pts.push_back(z);
    }
    return pts;
}
}  // namespace

TEST_CASE("wp is even and periodic") {
    for (double L : {6.0, 1.0}) {
        EllipticContext ctx(L, 1.0);
        const cplx z1(0.3, 0.2);
        CHECK(std::abs(ctx.wp(z1) - ctx.wp(-z1)) < 1e-12);
        const cplx z2(0.37, 0.11);
        CHECK(std::abs(ctx.wp(z2 + ctx.torus().omega1) - ctx.wp(z2)) < 1e-12);
        CHECK(std::abs(ctx.wp(z2 + ctx.torus().omega2) - ctx.wp(z2)) < 1e-12);
    }
}

TEST_CASE("wzeta is odd with the eta1 quasi-period") {
    EllipticContext ctx(6.0, 1.0);
    const cplx z(0.2, 0.3);
    CHECK(std::abs(ctx.wzeta(-z) + ctx.wzeta(z)) < 1e-12);
    const cplx z2(0.41, 0.0);
    CHECK(std::abs(ctx.wzeta(z2 + ctx.torus().omega1) - ctx.wzeta(z2) -
                   2.0 * ctx.eta1()) < 1e-11);
    CHECK(std::abs(ctx.wzeta(z2 + ctx.torus().omega2) - ctx.wzeta(z2) -
                   2.0 * ctx.eta2()) < 1e-11);
}

TEST_CASE("wsigma vanishes at 0 and obeys its quasi-periodicity") {
    EllipticContext ctx(6.0, 1.0);
    CHECK(std::abs(ctx.wsigma(0.0)) == 0.0);
    const cplx z(0.3, 0.4);
    const cplx lhs = ctx.wsigma(z + ctx.torus().omega1);
    const cplx rhs = -ctx.wsigma(z) * std::exp(2.0 * ctx.eta1() *
                                               (z + ctx.torus().omega1 / 2.0));
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(lhs));
}

TEST_CASE("log-derivative of sigma is zeta (finite differences)") {
    EllipticContext ctx(6.0, 1.0);
    const double h = 1e-5;
    const cplx z(0.6, 0.0);
    const cplx fd = std::log(ctx.wsigma(z + h) / ctx.wsigma(z - h)) / (2.0 * h);
    CHECK(std::abs(fd - ctx.wzeta(z)) < 1e-8);
}

TEST_CASE("lattice-sum oracle: pinned points") {
    {
        EllipticContext ctx(1.0, 1.0);
        LatticeOracle oracle(1.0, 1.0);
        const cplx got = ctx.wp(0.5), want = oracle.wp_sum(0.5);
        CHECK(std::abs(got - want) < 1e-8 * std::abs(want));
    }
    {
        EllipticContext ctx(1.0, 2.0);
        LatticeOracle oracle(1.0, 2.0);
        const cplx got = ctx.wzeta(0.25), want = oracle.zeta_sum(0.25);
        CHECK(std::abs(got - want) < 1e-8 * std::abs(want));
    }
}

TEST_CASE("lattice-sum oracle: random points per torus") {
    const std::vector<std::pair<double, double>> tori = {
        {1.0, 0.5}, {1.0, 1.0}, {1.0, 2.0}, {1.0, 4.0},
        {4.0, 1.0}, {6.0, 1.0}, {6.0, 2.0}, {8.0, 2.0}};
    unsigned seed = 11;
    for (auto [L, a] : tori) {
        EllipticContext ctx(L, a);
        LatticeOracle oracle(L, a);
        for (cplx z : random_points(ctx, 20, 0.05 * std::min(L, a), seed++)) {
            const cplx p = ctx.wp(z), po = oracle.wp_sum(z);
            CHECK(std::abs(p - po) < 1e-8 * (1.0 + std::abs(po)));
            const cplx ze = ctx.wzeta(z), zo = oracle.zeta_sum(z);
            CHECK(std::abs(ze - zo) < 1e-8 * (1.0 + std::abs(zo)));
            const cplx s = ctx.wsigma(z), so = oracle.sigma_sum(z);
            CHECK(std::abs(s - so) < 1e-8 * (1.0 + std::abs(so)));
        }
    }
}

TEST_CASE("Legendre relation on the (N, alpha) grid") {
    for (double N : {1.0, 4.0, 6.0, 8.0, 12.0})
        for (double a : {0.25, 0.5, 1.0, 2.0, 8.0}) {
            EllipticContext ctx(N, a);
            const cplx legendre = ctx.eta1() * ctx.torus().omega2 -
                                  ctx.eta2() * ctx.torus().omega1;
            CHECK(std::abs(legendre - I * pi) < 1e-10);
        }
}

TEST_CASE("zeta' = -wp by central differences") {
    const double h = 1e-5;
    unsigned seed = 101;
    for (auto [L, a] : std::vector<std::pair<double, double>>{
             {6.0, 1.0}, {1.0, 2.0}, {12.0, 0.25}, {8.0, 8.0}}) {
        EllipticContext ctx(L, a);
        for (cplx z : random_points(ctx, 20, 0.15 * std::min({L, a, 1.0}),
                                    seed++)) {
            const cplx fd = (ctx.wzeta(z + h) - ctx.wzeta(z - h)) / (2.0 * h);
            CHECK(std::abs(fd + ctx.wp(z)) < 1e-7 * (1.0 + std::abs(ctx.wp(z))));
        }
    }
}

TEST_CASE("direct and swapped modes agree on the overlap region") {
    for (auto [L, a] : std::vector<std::pair<double, double>>{
             {6.0, 1.0}, {4.0, 2.0}, {1.0, 1.0}, {8.0, 0.5}}) {
        EllipticContext d(L, a, EllipticMode::direct);
        EllipticContext s(L, a, EllipticMode::swapped);
        REQUIRE(!d.swapped());
        REQUIRE(s.swapped());
        for (cplx z : random_points(d, 10, 0.1 * std::min(L, a), 7)) {
            CHECK(std::abs(d.wp(z) - s.wp(z)) <
                  1e-10 * (1.0 + std::abs(d.wp(z))));
            CHECK(std::abs(d.wzeta(z) - s.wzeta(z)) <
                  1e-10 * (1.0 + std::abs(d.wzeta(z))));
            CHECK(std::abs(d.wsigma(z) - s.wsigma(z)) <
                  1e-10 * (1.0 + std::abs(d.wsigma(z))));
        }
        CHECK(std::abs(d.eta1() - s.eta1()) < 1e-10 * (1.0 + std::abs(d.eta1())));
        CHECK(std::abs(d.eta2() - s.eta2()) < 1e-10 * (1.0 + std::abs(d.eta2())));
    }
}

TEST_CASE("pole guard refuses lattice-adjacent arguments") {
    EllipticContext ctx(6.0, 1.0);
    CHECK_THROWS_AS(ctx.wp(cplx(1e-9, 0.0)), PoleProximity);
    CHECK_THROWS_AS(ctx.wzeta(cplx(6.0, 1.0) + cplx(1e-10, 0.0)),
                    PoleProximity);
    CHECK_NOTHROW(ctx.wsigma(cplx(1e-9, 0.0)));
}

TEST_CASE("h_exchange: symmetry, realness, error path") {
    CHECK(std::abs(h_exchange(3, 8, 1.0) - h_exchange(5, 8, 1.0)) < 1e-12);
    CHECK_THROWS_AS(h_exchange(0, 8, 1.0), InvalidSite);
    CHECK_THROWS_AS(h_exchange(16, 8, 1.0), InvalidSite);
    EllipticContext ctx(8.0, 1.0);
    for (int j = 1; j < 8; ++j) CHECK(h_exchange(j, ctx) > 0.0);
}

TEST_CASE("h_exchange equals the hyperbolic image sum") {
    for (auto [N, a] : std::vector<std::pair<int, double>>{
             {8, 1.0}, {8, 0.25}, {6, 2.0}, {12, 0.5}, {4, 8.0}}) {
        EllipticContext ctx(double(N), a);
        // The engine forms h from a bracket of O(sinh^2(pi/alpha)/pf^2)
        // cancellations, so its absolute accuracy floor scales like
        // eps * sinh^2(pi/alpha); the image sum itself is exact.
        const double h1 = h_exchange(1, ctx);
        const double floor_abs = 3e-15 * std::pow(std::sinh(pi / a), 2);
        for (int j = 1; j < N; ++j) {
            const double got = h_exchange(j, ctx);
            const double want = oracles::h_image_sum(j, N, a);
            CHECK(std::abs(got - want) < 1e-10 * (want + h1) + floor_abs);
        }
    }
}

TEST_CASE("h_exchange: nearest-neighbor limit at small alpha") {
    EllipticContext ctx(8.0, 0.25);
    CHECK(h_exchange(2, ctx) / h_exchange(1, ctx) < 0.01);
}

TEST_CASE("h_exchange: trigonometric limit is approached like 1/alpha") {
    const int N = 8;
    auto maxdev = [&](double a) {
        EllipticContext ctx(double(N), a);
        double worst = 0.0;
        for (int j = 1; j < N; ++j) {
            const double trig =
                (pi / N) * (pi / N) / std::pow(std::sin(pi * j / N), 2);
            const double h = h_exchange(j, ctx);
            worst = std::max(worst, std::abs(h - trig) / h);
        }
        return worst;
    };
    const double d8 = maxdev(8.0), d64 = maxdev(64.0), d512 = maxdev(512.0);
    CHECK(d64 < 0.2 * d8);
    CHECK(d512 < 0.2 * d64);
    CHECK(maxdev(8192.0) < 1e-3);
}

TEST_CASE("rho: odd, exactly N-periodic, compositional") {
    EllipticContext ctx(6.0, 1.0);
    const cplx t(0.7, 0.2);
    CHECK(std::abs(rho(-t, ctx) + rho(t, ctx)) < 1e-12);
    const cplx t2(1.3, 0.0);
    CHECK(std::abs(rho(t2 + 6.0, ctx) - rho(t2, ctx)) < 1e-11);
    const cplx direct = ctx.wzeta(0.5) - (2.0 / 6.0) * ctx.eta1() * 0.5;
    CHECK(std::abs(rho(0.5, ctx) - direct) < 1e-13);
}

TEST_CASE("tilde_sigma quasi-periodicity") {
    EllipticContext ctx(6.0, 1.0);
    const cplx w(0.8, 0.1), t(0.3, 0.0);
    const cplx base = tilde_sigma(w, t, ctx);
    CHECK(std::abs(tilde_sigma(w + 6.0, t, ctx) - base) <
          1e-10 * std::abs(base));
    const cplx omega = ctx.torus().omega2;
    const cplx shifted = tilde_sigma(w + omega, t, ctx) *
                         std::exp(-2.0 * pi * I * t / 6.0);
    CHECK(std::abs(shifted - base) < 1e-10 * std::abs(base));
}

TEST_CASE("tilde_sigma matches the independent theta-quotient route") {
    EllipticContext ctx(6.0, 1.0);
    for (cplx w : {cplx(0.8, 0.1), cplx(2.3, -0.4), cplx(0.4, 0.3)})
        for (cplx t : {cplx(0.3, 0.0), cplx(1.1, 0.25)}) {
            const cplx a = tilde_sigma(w, t, ctx);
            const cplx b = oracles::tilde_sigma_theta(w, t, 6.0, 1.0);
            CHECK(std::abs(a - b) < 1e-11 * std::abs(b));
            // antisymmetry under swapping the roles of w and t
            CHECK(std::abs(tilde_sigma(t, w, ctx) + a) < 1e-11 * std::abs(a));
        }
    CHECK_THROWS_AS(tilde_sigma(cplx(6.0, 0.0), cplx(0.3, 0.0), ctx),
                    DivisionNearZero);
}

TEST_CASE("F kernel: even, periodic, compositional") {
    EllipticContext ctx(6.0, 1.0);
    const cplx t(0.4, 0.3);
    CHECK(std::abs(F_kernel(-t, ctx) - F_kernel(t, ctx)) < 1e-11);
    const cplx t2(0.9, 0.0);
    CHECK(std::abs(F_kernel(t2 + 6.0, ctx) - F_kernel(t2, ctx)) < 1e-10);
    const cplx r = ctx.wzeta(0.5) - (2.0 / 6.0) * ctx.eta1() * 0.5;
    const cplx direct = -ctx.wp(0.5) + r * r + (4.0 / 6.0) * ctx.eta1();
    CHECK(std::abs(F_kernel(0.5, ctx) - direct) < 1e-13);
}

TEST_CASE("context bookkeeping: nome, truncation, mode selection") {
    EllipticContext ctx(8.0, 1.0);
    CHECK(std::abs(ctx.nome() - std::exp(-pi / 8.0)) < 1e-15);
    CHECK(ctx.swapped());  // alpha < L: the swapped frame has the small nome
    CHECK(ctx.truncation() <= 64);
    EllipticContext wide(1.0, 2.0);
    CHECK(!wide.swapped());
    EllipticContext tight(12.0, 0.25);
    CHECK(tight.swapped());
}
