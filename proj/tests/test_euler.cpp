#include <doctest.h>

#include <cmath>
#include <random>

#include "alesbm/errors.hpp"
#include "alesbm/euler.hpp"

using namespace alesbm;

namespace {

State random_valid_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> rho(0.2, 3.0), vel(-2.0, 2.0), p(0.1, 4.0);
    return primitive_to_conserved({rho(rng), Vec2(vel(rng), vel(rng)), p(rng)}, GasModel{1.4});
}

// d(F.n)/dQ - vn I by central differences.
Mat4 fd_ale_jacobian(const State& q, const Vec2& n, double vn, const GasModel& gas) {
    Mat4 a;
    const double eps = 1e-6;
    for (int j = 0; j < 4; ++j) {
        State qp = q, qm = q;
        qp[j] += eps;
        qm[j] -= eps;
        const State fp = physical_flux(qp, gas) * n - vn * qp;
        const State fm = physical_flux(qm, gas) * n - vn * qm;
        a.col(j) = (fp - fm) / (2.0 * eps);
    }
    return a;
}

} // namespace

TEST_CASE("perfect gas EOS") {
    CHECK(eos_pressure(1.0, 2.5, GasModel{1.4}) == doctest::Approx(1.0));
    CHECK(eos_pressure(1.0, 1.0, GasModel{2.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(eos_pressure(2.0, 0.0, GasModel{2.0}), SolverError);
    CHECK_THROWS_AS(eos_pressure(-1.0, 1.0, GasModel{1.4}), SolverError);
}

TEST_CASE("state conversions") {
    const GasModel gas{1.4};
    const State q = primitive_to_conserved({1.0, Vec2(0.0, 0.0), 1.0}, gas);
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(0.0));
    CHECK(q[3] == doctest::Approx(2.5));

    const PrimitiveState w = conserved_to_primitive(State(1.0, 1.0, 0.0, 1.0), gas);
    CHECK(w.p == doctest::Approx(0.2));

    std::mt19937 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const State s = random_valid_state(rng);
        const State back = primitive_to_conserved(conserved_to_primitive(s, gas), gas);
        CHECK((back - s).cwiseAbs().maxCoeff() <= 1e-14 * s.cwiseAbs().maxCoeff());
    }

    CHECK_THROWS_AS(conserved_to_primitive(State(-1.0, 0.0, 0.0, 1.0), gas), SolverError);
    CHECK_THROWS_AS(primitive_to_conserved({1.0, Vec2(0, 0), -2.0}, gas), SolverError);
}

TEST_CASE("physical flux") {
    const GasModel gas{1.4};
    SUBCASE("fluid at rest: pressure-only momentum block") {
        const State q = primitive_to_conserved({1.3, Vec2(0, 0), 0.7}, gas);
        const FluxTensor f = physical_flux(q, gas);
        CHECK(f(0, 0) == doctest::Approx(0.0));
        CHECK(f(0, 1) == doctest::Approx(0.0));
        CHECK(f(1, 0) == doctest::Approx(0.7));
        CHECK(f(1, 1) == doctest::Approx(0.0));
        CHECK(f(2, 0) == doctest::Approx(0.0));
        CHECK(f(2, 1) == doctest::Approx(0.7));
        CHECK(f(3, 0) == doctest::Approx(0.0));
        CHECK(f(3, 1) == doctest::Approx(0.0));
    }
    SUBCASE("hand-evaluated enthalpy flux") {
        // rho=1, u=(1,0), p=1: h = 3.5, H = 4, energy flux x-column = 4.
        const State q = primitive_to_conserved({1.0, Vec2(1.0, 0.0), 1.0}, gas);
        const FluxTensor f = physical_flux(q, gas);
        CHECK(f(0, 0) == doctest::Approx(1.0));
        CHECK(f(1, 0) == doctest::Approx(2.0));
        CHECK(f(3, 0) == doctest::Approx(4.0));
    }
    SUBCASE("90-degree rotational covariance") {
        std::mt19937 rng(3);
        for (int i = 0; i < 50; ++i) {
            const State q = random_valid_state(rng);
            // Rotate velocity by 90 degrees: (u,v) -> (-v,u).
            State qr = q;
            qr[1] = -q[2];
            qr[2] = q[1];
            const FluxTensor f = physical_flux(q, gas);
            const FluxTensor fr = physical_flux(qr, gas);
            // Mass/energy rows rotate between columns; momentum block rotates fully.
            CHECK(fr(0, 0) == doctest::Approx(-f(0, 1)).epsilon(1e-12));
            CHECK(fr(0, 1) == doctest::Approx(f(0, 0)).epsilon(1e-12));
            CHECK(fr(3, 0) == doctest::Approx(-f(3, 1)).epsilon(1e-12));
            CHECK(fr(3, 1) == doctest::Approx(f(3, 0)).epsilon(1e-12));
            CHECK(fr(1, 0) == doctest::Approx(f(2, 1)).epsilon(1e-12));
            CHECK(fr(2, 1) == doctest::Approx(f(1, 0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("ALE eigenstructure") {
    const GasModel gas{1.4};
    SUBCASE("Lagrangian frame eigenvalues") {
        const State q = primitive_to_conserved({1.0, Vec2(0.7, -0.3), 2.0}, gas);
        const Vec2 n = Vec2(3.0, 4.0).normalized();
        const double vn = Vec2(0.7, -0.3).dot(n);
        const EigenSystem es = ale_eigen(q, n, vn, gas);
        const double c = sound_speed(q, gas);
        CHECK(es.lambda[0] == doctest::Approx(-c).epsilon(1e-13));
        CHECK(es.lambda[1] == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(es.lambda[2] == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(es.lambda[3] == doctest::Approx(c).epsilon(1e-13));
    }
    SUBCASE("supersonic eigenvalues all positive") {
        const State q = primitive_to_conserved({1.0, Vec2(2.0, 0.0), 1.0}, gas);
        const EigenSystem es = ale_eigen(q, Vec2(1, 0), 0.0, gas);
        CHECK(es.lambda.minCoeff() > 0.0);
        CHECK(es.lambda[3] == doctest::Approx(2.0 + std::sqrt(1.4)).epsilon(1e-13));
    }
    SUBCASE("R Rinv = I for random states") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> angle(0.0, 6.28), vshift(-2.0, 2.0);
        for (int i = 0; i < 100; ++i) {
            const State q = random_valid_state(rng);
            const Vec2 n(std::cos(angle(rng)), std::sin(angle(rng)));
            const EigenSystem es = ale_eigen(q, n, vshift(rng), gas);
            CHECK(((es.R * es.Rinv) - Mat4::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    SUBCASE("reconstructs the finite-difference Jacobian") {
        std::mt19937 rng(13);
        std::uniform_real_distribution<double> angle(0.0, 6.28), vshift(-1.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const State q = random_valid_state(rng);
            const Vec2 n(std::cos(angle(rng)), std::sin(angle(rng)));
            const double vn = vshift(rng);
            const EigenSystem es = ale_eigen(q, n, vn, gas);
            const Mat4 a = es.R * es.lambda.asDiagonal() * es.Rinv;
            const Mat4 fd = fd_ale_jacobian(q, n, vn, gas);
            CHECK((a - fd).cwiseAbs().maxCoeff() <= 1e-5 * fd.cwiseAbs().maxCoeff());
        }
    }
    SUBCASE("ALE shift moves eigenvalues, not eigenvectors") {
        std::mt19937 rng(17);
        for (int i = 0; i < 50; ++i) {
            const State q = random_valid_state(rng);
            const Vec2 n = Vec2(1.0, 2.0).normalized();
            const double v = 0.8;
            const EigenSystem a = ale_eigen(q, n, 0.0, gas);
            const EigenSystem b = ale_eigen(q, n, v, gas);
            CHECK((b.lambda - (a.lambda.array() - v).matrix()).cwiseAbs().maxCoeff() <= 1e-13);
            CHECK((a.R - b.R).cwiseAbs().maxCoeff() == 0.0);
            CHECK((a.Rinv - b.Rinv).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("entropy") {
    CHECK(entropy(primitive_to_conserved({1.0, Vec2(0, 0), 1.0}, GasModel{1.4}), GasModel{1.4}) ==
          doctest::Approx(1.0));
    CHECK(entropy(primitive_to_conserved({1.0, Vec2(0.4, 0.1), 1.0}, GasModel{1.9}),
                  GasModel{1.9}) == doctest::Approx(1.0));
    CHECK(entropy(primitive_to_conserved({2.0, Vec2(0, 0), 4.0}, GasModel{2.0}), GasModel{2.0}) ==
          doctest::Approx(1.0));
}

TEST_CASE("max signal speed") {
    const GasModel gas{1.4};
    const State rest = primitive_to_conserved({1.0, Vec2(0, 0), 1.0}, gas);
    const double c = std::sqrt(1.4);
    CHECK(max_signal_speed(rest, Vec2(1, 0), 0.0, gas) == doctest::Approx(c));

    const State moving = primitive_to_conserved({1.0, Vec2(0.5, 0.2), 1.0}, gas);
    CHECK(max_signal_speed(moving, Vec2(1, 0), 0.5, gas) == doctest::Approx(c));

    const State fast = primitive_to_conserved({1.0, Vec2(2.0, 0.0), 1.0}, gas);
    CHECK(max_signal_speed(fast, Vec2(1, 0), 0.0, gas) == doctest::Approx(2.0 + c));
}
