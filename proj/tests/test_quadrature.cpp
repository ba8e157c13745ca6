#include <doctest.h>

#include <cmath>

#include "alesbm/quadrature.hpp"

using namespace alesbm;

namespace {

// Exact reference-triangle moment: int xi^a eta^b = a! b! / (a+b+2)!.
double exact_tri_moment(int a, int b) {
    auto fact = [](int n) {
        double r = 1.0;
        for (int i = 2; i <= n; ++i) r *= i;
        return r;
    };
    return fact(a) * fact(b) / fact(a + b + 2);
}

} // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
    for (int degree : {1, 2, 3, 4, 5, 6, 7, 8}) {
        const auto& rule = triangle_rule(degree);
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b) {
                double s = 0.0;
                for (const auto& qp : rule)
                    s += qp.w * std::pow(qp.xi, a) * std::pow(qp.eta, b);
                CHECK(s == doctest::Approx(exact_tri_moment(a, b)).epsilon(1e-13));
            }
    }
}

TEST_CASE("triangle rule weights are positive and sum to the reference area") {
    for (int degree : {1, 2, 4, 5, 6, 8}) {
        const auto& rule = triangle_rule(degree);
        double sum = 0.0;
        for (const auto& qp : rule) {
            CHECK(qp.w > 0.0);
            sum += qp.w;
        }
        CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("gauss-legendre rules on [0,1] hit polynomial moments") {
    for (int n = 1; n <= 8; ++n) {
        const auto& rule = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (const auto& qp : rule) s += qp.w * std::pow(qp.x, k);
            CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
        }
    }
}

TEST_CASE("gauss_points_for_degree covers the requested degree") {
    for (int d = 0; d <= 15; ++d) {
        const int n = gauss_points_for_degree(d);
        CHECK(2 * n - 1 >= d);
    }
}
