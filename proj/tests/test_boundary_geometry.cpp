#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "alesbm/boundary_geometry.hpp"
#include "alesbm/cases.hpp"
#include "alesbm/errors.hpp"

using namespace alesbm;

TEST_CASE("closest point on the unit circle") {
    const CircleBoundary circle = CircleBoundary::fixed(Vec2::Zero(), 1.0);
    SUBCASE("chord midpoint of a 20-degree arc") {
        const double d10 = 10.0 * std::numbers::pi / 180.0;
        const Projection pr = circle.closest_point(Vec2(std::cos(d10), 0.0), 0.0);
        CHECK(pr.x[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(pr.x[1] == doctest::Approx(0.0));
        CHECK(pr.d == doctest::Approx(1.0 - std::cos(d10)).epsilon(1e-13));
        CHECK(pr.n[0] == doctest::Approx(1.0));
    }
    SUBCASE("point already on the circle") {
        const Vec2 xt = Vec2(0.6, 0.8);
        const Projection pr = circle.closest_point(xt, 0.0);
        CHECK(std::abs(pr.d) <= 1e-15);
        CHECK((pr.x - xt).norm() <= 1e-15);
    }
    SUBCASE("center is ambiguous") {
        CHECK_THROWS_AS(circle.closest_point(Vec2::Zero(), 0.0), SolverError);
    }
}

TEST_CASE("kidder shell descriptor tracks h(t)") {
    const KidderSolution kd;
    const CircleBoundary inner = CircleBoundary::scaling(
        Vec2::Zero(), [kd](double t) { return kd.r_i0 * kd.h(t); },
        [kd](double t) { return kd.r_i0 * kd.hdot(t); });
    const double t = 0.12;
    const double r = 0.9 * kd.h(t);
    const Projection pr = inner.closest_point(Vec2(r, 0.0), t);
    CHECK(std::abs(pr.d) <= 1e-14);
    // Wall velocity matches the exact radial velocity at the boundary.
    const Vec2 w = inner.wall_velocity(pr.x, t);
    CHECK(w[0] == doctest::Approx(kd.exact(r, t).ur).epsilon(1e-12));
}

TEST_CASE("wall velocities") {
    SUBCASE("static circle") {
        const CircleBoundary c = CircleBoundary::fixed(Vec2(1.0, 2.0), 0.5);
        CHECK(c.wall_velocity(Vec2(1.5, 2.0), 0.0).norm() == 0.0);
    }
    SUBCASE("horizontal harmonic oscillation") {
        const double A = 0.1, f = 0.1, two_pi = 2.0 * std::numbers::pi;
        const CircleBoundary c = CircleBoundary::translating(
            Vec2::Zero(), 1.0, [=](double t) { return Vec2(A * std::sin(two_pi * f * t), 0.0); },
            [=](double t) { return Vec2(two_pi * A * f * std::cos(two_pi * f * t), 0.0); });
        const Vec2 w0 = c.wall_velocity(Vec2(1.0, 0.0), 0.0);
        CHECK(w0[0] == doctest::Approx(0.0628319).epsilon(1e-5));
        CHECK(w0[1] == doctest::Approx(0.0));
    }
    SUBCASE("vertical harmonic oscillation starts at rest") {
        const double A = 0.05, f = 0.25, two_pi = 2.0 * std::numbers::pi;
        const CircleBoundary c = CircleBoundary::translating(
            Vec2::Zero(), 1.0,
            [=](double t) { return Vec2(0.0, A * (std::cos(two_pi * f * t) - 1.0)); },
            [=](double t) { return Vec2(0.0, -two_pi * A * f * std::sin(two_pi * f * t)); });
        CHECK(c.wall_velocity(Vec2(0.0, 1.0), 0.0).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("projection identities for randomized queries") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> angle(0.0, 6.28), rad(0.3, 2.5), time(0.0, 1.0);
    const CircleBoundary c = CircleBoundary::translating(
        Vec2(0.2, -0.1), 1.3, [](double t) { return Vec2(0.1 * t, 0.05 * t * t); },
        [](double t) { return Vec2(0.1, 0.1 * t); });
    for (int i = 0; i < 200; ++i) {
        const double t = time(rng);
        const Vec2 xt = c.center(t) + rad(rng) * Vec2(std::cos(angle(rng)), std::sin(angle(rng)));
        const Projection pr = c.closest_point(xt, t);
        CHECK(std::abs((pr.x - c.center(t)).norm() - c.radius(t)) <= 1e-13);
        CHECK((pr.x - (xt + pr.d * pr.n)).cwiseAbs().maxCoeff() <= 1e-13);
        // n is the outward radial direction at x.
        CHECK(pr.n.dot(pr.x - c.center(t)) == doctest::Approx(c.radius(t)).epsilon(1e-13));
    }
}
