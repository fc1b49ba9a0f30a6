#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsfs/lemma_oracle.hpp"

using namespace nsfs;

namespace {

constexpr double pi = std::numbers::pi;

// n = 3, alpha = 1, beta = 4: F is the Newtonian potential of the radial
// density (1 + rho)^{-4}, 4 pi [ (1/r) int_0^r rho^2 g + int_r^inf rho g ].
double newtonian_oracle(double r) {
    const double a = 1 + r;
    return 4 * pi * (r * r / (3 * a * a * a) + 1 / (2 * a * a) - 1 / (3 * a * a * a));
}

// For alpha = n - 2 the kernel is the Newtonian one and, for a radial
// density g, F = |S^{n-1}| [ r^{2-n} int_0^r rho^{n-1} g + int_r^inf rho g ].
// With g = (1 + rho)^{-4} both integrals have elementary antiderivatives in t = 1 + rho.
double outer_moment(double r) {
    const double t = 1 + r;
    return 1 / (2 * t * t) - 1 / (3 * t * t * t);
}

double newtonian_oracle_4d(double r) {
    const auto anti = [](double t) { return std::log(t) + 3 / t - 3 / (2 * t * t) + 1 / (3 * t * t * t); };
    return 2 * pi * pi * ((anti(1 + r) - anti(1.0)) / (r * r) + outer_moment(r));
}

double newtonian_oracle_5d(double r) {
    const auto anti = [](double t) { return t - 4 * std::log(t) - 6 / t + 2 / (t * t) - 1 / (3 * t * t * t); };
    return 8 * pi * pi / 3 * ((anti(1 + r) - anti(1.0)) / (r * r * r) + outer_moment(r));
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(LemmaParams(3, 3.0, 4.0), DomainError);   // alpha = n
    CHECK_THROWS_AS(LemmaParams(3, -0.5, 4.0), DomainError);  // alpha < 0
    CHECK_THROWS_AS(LemmaParams(3, 1.0, 2.0), DomainError);   // alpha + beta = n
    CHECK_THROWS_AS(LemmaParams(2, 1.0, 4.0), DomainError);
    CHECK_THROWS_AS(LemmaParams(3, 1.0, 4.0, {10.0, -1.0}), DomainError);
    CHECK(LemmaParams(5, 2.0, 6.0).gamma() == 2.0);
    CHECK(LemmaParams(5, 3.0, 4.0).gamma() == 2.0);
    CHECK(LemmaParams(5, 2.0, 5.0).log_case());
    CHECK_FALSE(LemmaParams(5, 2.0, 6.0).log_case());
}

TEST_CASE("alpha = 0 is a constant equal to the radial integral") {
    const LemmaParams p(3, 0.0, 4.0);
    for (double r : {0.5, 3.0, 40.0}) CHECK(riesz_convolution(p, r) == doctest::Approx(4 * pi / 3).epsilon(1e-9));
    // n = 5, beta = 6: |S^4| B(5, 1) = (8 pi^2 / 3) / 5.
    const LemmaParams q(5, 0.0, 6.0);
    for (double r : {0.5, 3.0, 40.0})
        CHECK(riesz_convolution(q, r) == doctest::Approx(8 * pi * pi / 15).epsilon(1e-9));
}

TEST_CASE("Newtonian potential oracles in four and five dimensions") {
    const LemmaParams p4(4, 2.0, 4.0);
    const LemmaParams p5(5, 3.0, 4.0);
    for (double r : {0.3, 1.0, 5.0, 30.0, 300.0}) {
        CHECK(riesz_convolution(p4, r) == doctest::Approx(newtonian_oracle_4d(r)).epsilon(1e-8));
        CHECK(riesz_convolution(p5, r) == doctest::Approx(newtonian_oracle_5d(r)).epsilon(1e-8));
    }
}

TEST_CASE("Newtonian potential oracle in three dimensions") {
    const LemmaParams p(3, 1.0, 4.0);
    for (double r : {0.25, 1.0, 2.0, 10.0, 100.0})
        CHECK(riesz_convolution(p, r) == doctest::Approx(newtonian_oracle(r)).epsilon(1e-8));
    CHECK_THROWS_AS(riesz_convolution(p, 0.0), DomainError);
}

TEST_CASE("F decreases in r for alpha > 0") {
    const LemmaParams p(3, 2.0, 2.5);
    double prev = INFINITY;
    for (double r : p.eval_radii) {
        const double v = riesz_convolution(p, r);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("quadrature self-consistency under a larger budget") {
    QuadratureOptions base;
    base.rel_tol = 1e-9;
    base.max_refinements = 10;
    QuadratureOptions doubled = base;
    doubled.max_refinements = 11;  // one more halving doubles the node count
    for (const LemmaParams& p : {LemmaParams(3, 1.0, 2.5), LemmaParams(5, 3.0, 4.0)})
        for (double r : {10.0, 300.0}) {
            const double a = riesz_convolution(p, r, base);
            const double b = riesz_convolution(p, r, doubled);
            CHECK(std::abs(a - b) < 1e-6 * std::abs(b));
        }
}

TEST_CASE("decay slopes in five dimensions") {
    const DecayCheck a = verify_decay(LemmaParams(5, 2.0, 6.0));
    CHECK(a.pass);
    CHECK(a.slope >= -2.1);
    CHECK(a.slope <= -1.9);
    const DecayCheck b = verify_decay(LemmaParams(5, 3.0, 4.0));
    CHECK(b.pass);
    CHECK(b.slope >= -2.15);
    CHECK(b.slope <= -1.85);
    const DecayCheck c = verify_decay(LemmaParams(5, 2.0, 5.0));
    CHECK(c.log_case);
    CHECK(c.pass);
    CHECK(c.log_slope > 0.0);
    CHECK(c.log_r_squared > 0.99);
}

TEST_CASE("decay check rejects a narrow radius span") {
    CHECK_THROWS_AS(verify_decay(LemmaParams(3, 1.0, 4.0, {10.0, 20.0})), DomainError);
    CHECK_THROWS_AS(verify_decay(LemmaParams(3, 1.0, 4.0, {10.0})), DomainError);
}

TEST_CASE("default grids") {
    for (int n : {3, 5}) {
        const auto grid = default_lemma_grid(n);
        REQUIRE(grid.size() == 7);
        int log_cases = 0;
        for (const auto& c : grid) {
            CHECK(c.n == n);
            CHECK_NOTHROW(LemmaParams(c.n, c.alpha, c.beta));
            log_cases += c.beta == n ? 1 : 0;
        }
        CHECK(log_cases == 1);
        CHECK(grid.back().beta == n);
    }
    CHECK_THROWS_AS(default_lemma_grid(4), DomainError);
}
