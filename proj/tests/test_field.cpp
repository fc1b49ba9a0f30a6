#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nsfs/error.hpp"
#include "nsfs/field.hpp"
#include "nsfs/norms.hpp"
#include "nsfs/nsf1.hpp"
#include "nsfs/profile.hpp"
#include "nsfs/stencil.hpp"
#include "support.hpp"

using namespace nsfs;
using testing::sq;

TEST_CASE("grid geometry") {
    const GridSpec g(3, 8, 2.0);
    CHECK(g.spacing() == 0.5);
    CHECK(g.cell_volume() == 0.125);
    CHECK(g.size() == 512);
    CHECK(g.coordinate(0) == -1.75);
    CHECK(g.coordinate(7) == 1.75);
    CHECK(g.stride(0) == 64);
    CHECK(g.stride(2) == 1);
    CHECK(g.nearest_index(-5.0) == 0);
    CHECK(g.nearest_index(0.3) == 4);
    CHECK(describe(g) == "n=3 N=8 L=2");
    std::vector<std::int64_t> idx(3);
    for (std::size_t flat : {std::size_t{0}, std::size_t{77}, std::size_t{511}}) {
        g.unflatten(flat, idx);
        CHECK(g.flatten(idx) == flat);
    }
    std::vector<double> x(3);
    g.point(77, x);  // 77 = (1, 1, 5)
    CHECK(x[0] == -1.25);
    CHECK(x[2] == 0.75);
    CHECK(g.radius(77) == doctest::Approx(std::sqrt(2 * 1.25 * 1.25 + 0.75 * 0.75)));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(GridSpec(2, 8, 1.0), DomainError);
    CHECK_THROWS_AS(GridSpec(8, 4, 1.0), DomainError);
    CHECK_THROWS_AS(GridSpec(3, 7, 1.0), DomainError);
    CHECK_THROWS_AS(GridSpec(3, 8, 0.0), DomainError);
    CHECK_THROWS_AS(GridSpec(3, 8, INFINITY), DomainError);
    CHECK_THROWS_AS(require_same_grid(GridSpec(3, 8, 1), GridSpec(3, 10, 1), "test"), GridMismatch);
    try {
        require_same_grid(GridSpec(3, 8, 1), GridSpec(4, 8, 1), "test");
    } catch (const GridMismatch& e) {
        const std::string msg = e.what();
        CHECK(msg.find("n=3 N=8 L=1") != std::string::npos);
        CHECK(msg.find("n=4 N=8 L=1") != std::string::npos);
    }
}

TEST_CASE("field arithmetic") {
    const GridSpec g(3, 8, 1.0);
    const VectorField v = sample_vector(g, [](auto x, auto out) {
        out[0] = 3.0;
        out[1] = 4.0 * x[0];
        out[2] = 0.0;
    });
    const ScalarField m = magnitude(v);
    std::vector<double> x(3);
    for (std::size_t i = 0; i < g.size(); i += 37) {
        g.point(i, x);
        CHECK(m[i] == doctest::Approx(std::sqrt(9 + 16 * x[0] * x[0])));
    }
    const VectorField w = axpby(2.0, v, -1.0, scaled(v, 2.0));
    CHECK(testing::max_abs(w[0].data) == 0.0);
    const VectorField flat = flatten(gradient(v, 2));
    CHECK(flat.components.size() == 9);
    CHECK(flat[3][100] == doctest::Approx(4.0));
    CHECK_THROWS_AS(axpby(1, v, 1, VectorField(GridSpec(3, 10, 1))), GridMismatch);
}

TEST_CASE("L^p norms of simple fields") {
    const GridSpec g(3, 16, 2.0);
    ScalarField one(g);
    for (double& v : one.data) v = 1.0;
    // Constant c over the box [-L, L]^3: c (2L)^{3/p}.
    CHECK(lp_norm(one, 2.0) == doctest::Approx(std::pow(64.0, 0.5)));
    CHECK(lp_norm(one, 3.0) == doctest::Approx(4.0));
    // Ball volume by the midpoint rule.
    const std::vector<double> c{0.0, 0.0, 0.0};
    const RegionIntegral ball = power_integral(one, 1.0, Region::ball(c, 1.5));
    CHECK(ball.value == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 3.375).epsilon(0.05));
    CHECK(ball.clipped_fraction < 0.05);
    const RegionIntegral outside = power_integral(one, 1.0, Region::outside_ball(c, 1.5));
    CHECK(outside.value + ball.value == doctest::Approx(64.0));
    const std::vector<double> corner{2.0, 2.0, 2.0};
    CHECK(power_integral(one, 1.0, Region::ball(corner, 1.0)).clipped_fraction > 0.8);
    CHECK_THROWS_AS(lp_norm(one, 0.5), DomainError);
    CHECK_THROWS_AS(lp_norm(one, 2.0, Region::ball(c, 0.0)), DomainError);
}

TEST_CASE("weighted sup and C1_d norms") {
    const GridSpec g(3, 8, 4.0);
    const VectorField v = sample_vector(g, [](auto x, auto out) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        out[0] = 1.0 / (1.0 + r);
        out[1] = 0.0;
        out[2] = 0.0;
    });
    CHECK(weighted_sup_norm(v, 1.0) == doctest::Approx(1.0));
    GradientField zero(g);
    CHECK(cd1_norm(v, zero) == doctest::Approx(weighted_sup_norm(v, 0.0)));
}

TEST_CASE("Morrey sample and norm") {
    const GridSpec g(3, 16, 4.0);
    const MorreySample s = default_morrey_sample(g, 3);
    CHECK(s.centers.size() == 27);
    CHECK(s.centers[13][0] == 0.0);
    CHECK(s.centers[0][0] == -2.0);
    CHECK(s.radii.front() == 0.5);
    CHECK(s.radii.back() == 4.0);
    ScalarField one(g);
    for (double& v : one.data) v = 1.0;
    // lambda = 0, p = 1: the largest ball that fits dominates.
    const MorreyValue m = morrey_norm(one, 1.0, 0.0, s);
    CHECK(m.argmax_radius == 4.0);
    CHECK_THROWS_AS(morrey_norm(one, 1.0, 3.0, s), DomainError);
    CHECK_THROWS_AS(morrey_norm(one, 0.5, 0.0, s), DomainError);
    CHECK_THROWS_AS(default_morrey_sample(g, 0), DomainError);
}

TEST_CASE("line fit and radial profile") {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, 3, 5, 7};
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{0, 1}), DomainError);

    // An exact power law is recovered exactly because the fit uses the
    // radius where each shell attains its supremum.
    const GridSpec g(3, 32, 8.0);
    for (double e : {1.0, 2.0, 3.5}) {
        const ScalarField s = sample_scalar(g, [e](auto x) {
            return std::pow(x[0] * x[0] + x[1] * x[1] + x[2] * x[2], -e / 2);
        });
        const DecayProfile p = radial_profile(s);
        CHECK(p.fitted_exponent == doctest::Approx(e).epsilon(1e-10));
        CHECK(p.fit_residual < 1e-10);
        CHECK(p.fit_points >= 2);
    }
    const DecayProfile zero = radial_profile(ScalarField(g));
    CHECK(zero.fitted_exponent == 0.0);
    ProfileOptions bad;
    bad.shells = 3;
    CHECK_THROWS_AS(radial_profile(ScalarField(g), bad), DomainError);
}

TEST_CASE("stencils are exact on polynomials up to their order") {
    const GridSpec g(3, 12, 1.5);
    // Order 4 differentiates quartics exactly, including the one-sided rims.
    const ScalarField q = sample_scalar(g, [](auto x) { return std::pow(x[1], 4) - 2 * x[1] * x[1] + x[1]; });
    const ScalarField d = derivative(q, 1, 4);
    const ScalarField d2 = second_derivative(q, 1, 4);
    std::vector<double> x(3);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        REQUIRE(d[i] == doctest::Approx(4 * std::pow(x[1], 3) - 4 * x[1] + 1).epsilon(1e-9));
        REQUIRE(d2[i] == doctest::Approx(12 * x[1] * x[1] - 4).epsilon(1e-8));
    }
    const ScalarField c = sample_scalar(g, [](auto x) { return x[2] * x[2] - x[2]; });
    const ScalarField dc = derivative(c, 2, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, x);
        REQUIRE(dc[i] == doctest::Approx(2 * x[2] - 1).epsilon(1e-10));
    }
    CHECK_THROWS(derivative(c, 0, 3));
    CHECK_THROWS(derivative(ScalarField(GridSpec(3, 6, 1.0)), 0, 4));
}

TEST_CASE("fourth-order convergence of the Laplacian") {
    double prev = 0.0;
    for (int n : {16, 32}) {
        const GridSpec g(3, n, 3.0);
        const ScalarField s = sample_scalar(g, [](auto x) { return std::sin(x[0]) * std::cos(x[1]) * std::sin(0.5 * x[2]); });
        const ScalarField lap = laplacian(s, 4);
        double err = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(lap[i] + 2.25 * s[i]));
        if (prev > 0.0) CHECK(prev / err > 12.0);
        prev = err;
    }
}

TEST_CASE("OpenMP stencils equal the serial reference bit for bit") {
    auto rng = testing::rng(8);
    const GridSpec g(3, 12, 1.0);
    const ScalarField s = testing::random_scalar(g, rng);
    for (int order : {2, 4})
        for (int axis = 0; axis < 3; ++axis) {
            CHECK(testing::bitwise_equal(derivative(s, axis, order).data, reference::derivative(s, axis, order).data));
            CHECK(testing::bitwise_equal(second_derivative(s, axis, order).data,
                                         reference::second_derivative(s, axis, order).data));
            CHECK(testing::bitwise_equal(derivative(s, axis, order, Exec::serial).data,
                                         derivative(s, axis, order, Exec::parallel).data));
        }
}

TEST_CASE("NSF1 layout and error handling") {
    const GridSpec g(3, 4, 1.5);
    ScalarField s(g);
    for (std::size_t i = 0; i < g.size(); ++i) s[i] = static_cast<double>(i) - 0.25;
    std::ostringstream os;
    write_nsf1(os, g, {&s});
    const std::string bytes = os.str();
    // magic + version + dim + N + L + ncomp + data
    CHECK(bytes.size() == 4 + 4 + 4 + 8 + 8 + 4 + 64 * 8);
    CHECK(bytes.substr(0, 4) == "NSF1");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);
    CHECK(static_cast<unsigned char>(bytes[8]) == 3);
    CHECK(static_cast<unsigned char>(bytes[12]) == 4);

    std::istringstream is(bytes);
    const Nsf1File f = read_nsf1(is);
    CHECK(f.grid == g);
    REQUIRE(f.components.size() == 1);
    CHECK(testing::bitwise_equal(f.components[0].data, s.data));

    auto corrupt = [&](std::string b) {
        std::istringstream in(b);
        return read_nsf1(in);
    };
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(corrupt(bad), FormatError);
    bad = bytes;
    bad[4] = 2;
    CHECK_THROWS_AS(corrupt(bad), FormatError);
    bad = bytes;
    bad[8] = 1;  // dim 1
    CHECK_THROWS_AS(corrupt(bad), FormatError);
    CHECK_THROWS_AS(corrupt(bytes.substr(0, bytes.size() - 3)), FormatError);
    CHECK_THROWS_AS(corrupt(bytes.substr(0, 10)), FormatError);
    CHECK_THROWS_AS(corrupt(bytes + "x"), FormatError);
    CHECK_THROWS_AS(read_nsf1(std::string("/nonexistent/file.nsf1")), FormatError);
}
