#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "nsfs/convolve.hpp"
#include "nsfs/norms.hpp"
#include "nsfs/nsf1.hpp"
#include "nsfs/profile.hpp"
#include "nsfs/stencil.hpp"
#include "support.hpp"

using namespace nsfs;

// Each suite below runs at least 200 seeded cases.
constexpr int kCases = 200;

TEST_CASE("norm axioms") {
    const GridSpec g(3, 8, 1.5);
    const std::vector<double> c{0.2, -0.1, 0.3};
    for (int s = 0; s < kCases; ++s) {
        auto rng = testing::rng(1000 + s);
        const VectorField x = testing::random_vector(g, rng);
        const VectorField y = testing::random_vector(g, rng);
        const double lambda = testing::uniform(rng, -3, 3);
        const double p = std::vector<double>{1.0, 2.0, 3.5}[s % 3];
        const Region region = s % 2 ? Region::whole() : Region::ball(c, testing::uniform(rng, 0.3, 2.0));
        const double nx = lp_norm(x, p, region);
        const double ny = lp_norm(y, p, region);
        REQUIRE(nx >= 0.0);
        REQUIRE(lp_norm(scaled(x, lambda), p, region) == doctest::Approx(std::abs(lambda) * nx).epsilon(1e-12));
        REQUIRE(lp_norm(axpby(1, x, 1, y), p, region) <= (nx + ny) * (1 + 1e-12));
        REQUIRE(lp_norm(VectorField(g), p, region) == 0.0);
        const double a = testing::uniform(rng, 0, 2);
        REQUIRE(weighted_sup_norm(axpby(1, x, 1, y), a) <= (weighted_sup_norm(x, a) + weighted_sup_norm(y, a)) * (1 + 1e-12));
        REQUIRE(weighted_sup_norm(scaled(x, lambda), a) == doctest::Approx(std::abs(lambda) * weighted_sup_norm(x, a)));
    }
}

TEST_CASE("NSF1 round trip is bit exact") {
    const double specials[] = {0.0, -0.0, std::numeric_limits<double>::denorm_min(), -1e308,
                               std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN()};
    for (int s = 0; s < kCases; ++s) {
        auto rng = testing::rng(2000 + s);
        const int dim = 3 + s % 3;
        const std::int64_t n = 2 * (1 + s % 3);
        const GridSpec g(dim, n, testing::uniform(rng, 0.1, 100.0));
        const auto ncomp = static_cast<std::size_t>(1 + s % 4);
        std::vector<ScalarField> comps;
        for (std::size_t k = 0; k < ncomp; ++k) {
            ScalarField f = testing::random_scalar(g, rng);
            f[static_cast<std::size_t>(s) % g.size()] = specials[s % 6];
            comps.push_back(std::move(f));
        }
        std::vector<const ScalarField*> ptrs;
        for (const auto& f : comps) ptrs.push_back(&f);
        std::ostringstream os;
        write_nsf1(os, g, ptrs);
        std::istringstream is(os.str());
        const Nsf1File back = read_nsf1(is);
        REQUIRE(back.grid == g);
        REQUIRE(back.components.size() == ncomp);
        for (std::size_t k = 0; k < ncomp; ++k) REQUIRE(testing::bitwise_equal(back.components[k].data, comps[k].data));
    }
}

TEST_CASE("stencil determinism across execution policies") {
    for (int s = 0; s < kCases; ++s) {
        auto rng = testing::rng(3000 + s);
        const GridSpec g(3 + s % 2, 8 + 2 * (s % 3), 1.0);
        const ScalarField f = testing::random_scalar(g, rng);
        const int axis = s % g.dim();
        const int order = s % 2 ? 2 : 4;
        REQUIRE(testing::bitwise_equal(derivative(f, axis, order, Exec::parallel).data,
                                       reference::derivative(f, axis, order).data));
        REQUIRE(testing::bitwise_equal(second_derivative(f, axis, order, Exec::parallel).data,
                                       reference::second_derivative(f, axis, order).data));
    }
}

TEST_CASE("convolution is linear and policy independent") {
    const GridSpec g(3, 8, 2.0);
    const ConvolutionPlan plan = build_plan(g);
    for (int s = 0; s < kCases; ++s) {
        auto rng = testing::rng(4000 + s);
        const VectorField x = testing::random_vector(g, rng);
        const VectorField y = testing::random_vector(g, rng);
        const double a = testing::uniform(rng, -2, 2);
        const double b = testing::uniform(rng, -2, 2);
        const StokesFields sx = stokes_solve(plan, x, Exec::serial);
        const StokesFields sy = stokes_solve(plan, y);
        const StokesFields sxy = stokes_solve(plan, axpby(a, x, b, y));
        const VectorField combo = axpby(a, sx.u, b, sy.u);
        const double scale = l2_norm(combo) + 1e-300;
        REQUIRE(l2_norm(axpby(1, sxy.u, -1, combo)) <= 1e-12 * scale);
        if (s % 10 == 0) {
            const StokesFields px = stokes_solve(plan, x, Exec::parallel);
            REQUIRE(testing::bitwise_equal(px.u, sx.u));
            REQUIRE(testing::bitwise_equal(px.p.data, sx.p.data));
        }
    }
}

TEST_CASE("fitted decay exponents are scale invariant") {
    const GridSpec g(3, 16, 8.0);
    for (int s = 0; s < kCases; ++s) {
        auto rng = testing::rng(5000 + s);
        const double e = testing::uniform(rng, 0.5, 4.0);
        const double amp = std::exp(testing::uniform(rng, -20, 20));
        const ScalarField f = sample_scalar(g, [&](auto x) {
            return amp * std::pow(1.0 + std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), -e);
        });
        ScalarField unit = f;
        for (double& v : unit.data) v /= amp;
        REQUIRE(radial_profile(f).fitted_exponent == doctest::Approx(radial_profile(unit).fitted_exponent).epsilon(1e-9));
    }
}
