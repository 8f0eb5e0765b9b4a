#include <cmath>
#include <random>

#include "doctest.h"
#include "ggred/errors.hpp"
#include "ggred/grassmann.hpp"

using namespace ggred;

namespace {

GrassmannElement th(int n, int i) { return GrassmannElement::generator(n, i); }

Eigen::MatrixXd random_antisymmetric(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = nd(rng);
            a(j, i) = -a(i, j);
        }
    return a;
}

}  // namespace

TEST_CASE("Grassmann products") {
    const int n = 4;
    CHECK(max_abs_diff(th(n, 0) * th(n, 1), -(th(n, 1) * th(n, 0))) == 0.0);
    CHECK((th(n, 2) * th(n, 2)).is_zero());
    auto a = th(n, 0) + th(n, 1) * 2.0;
    auto b = th(n, 2) * th(n, 3) + GrassmannElement::scalar(n, 1.5);
    auto c = th(n, 1) - th(n, 3);
    CHECK(max_abs_diff((a * b) * c, a * (b * c)) < 1e-15);
    // θ2θ0θ1 = θ0θ1θ2
    CHECK((th(n, 2) * th(n, 0) * th(n, 1)).coefficient(0b111) == 1.0);
    CHECK((th(n, 1) * th(n, 0) * th(n, 2)).coefficient(0b111) == -1.0);
    CHECK((a * b).is_odd());
    CHECK(b.is_even());
    CHECK_THROWS_AS(GrassmannElement(17), Error);
    CHECK_THROWS_AS(GrassmannElement::generator(3, 3), UnknownGeneratorError);
}

TEST_CASE("even inverse and exponential") {
    const int n = 4;
    auto x = GrassmannElement::scalar(n, 2.0) + th(n, 0) * th(n, 1) - th(n, 2) * th(n, 3) * 0.5;
    auto one = x * x.inverse();
    CHECK(std::abs(one.body() - 1.0) < 1e-15);
    CHECK(one.soul().max_abs() < 1e-15);
    auto s = th(n, 0) * th(n, 1) * 3.0;
    CHECK(max_abs_diff(s.exp(), GrassmannElement::scalar(n, 1.0) + s) == 0.0);
    CHECK_THROWS_AS(th(n, 0).exp(), DegreeError);
}

TEST_CASE("Berezin integral") {
    SUBCASE("single generator") {
        CHECK(berezin_integral(th(1, 0), {0}).body() == 1.0);
        CHECK(berezin_integral(GrassmannElement::scalar(1, 1.0), {0}).is_zero());
    }
    SUBCASE("footnote convention") {
        // θ⁺ = θ0, θ⁻ = θ1
        CHECK(berezin_integral(th(2, 1) * th(2, 0), {0, 1}).body() == 1.0);
        CHECK(berezin_integral(th(2, 0) * th(2, 1), {0, 1}).body() == -1.0);
    }
    SUBCASE("partial integration keeps the rest") {
        auto e = th(3, 0) * th(3, 2) + th(3, 1);
        auto r = berezin_integral(e, {2});
        CHECK(r.coefficient(0b001) == -1.0);
        CHECK(r.max_abs() == 1.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(berezin_integral(th(2, 0), {2}), UnknownGeneratorError);
        CHECK_THROWS_AS(berezin_integral(th(2, 0), {0, 0}), UnknownGeneratorError);
    }
}

TEST_CASE("Pfaffian") {
    std::mt19937_64 rng(11);
    SUBCASE("examples") {
        Eigen::Matrix2d a;
        a << 0, 3.5, -3.5, 0;
        CHECK(fermionic_gaussian(a) == doctest::Approx(3.5));
        Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
        b(0, 1) = 2.0;
        b(1, 0) = -2.0;
        b(2, 3) = -0.7;
        b(3, 2) = 0.7;
        CHECK(fermionic_gaussian(b) == doctest::Approx(-1.4));
    }
    SUBCASE("square is the determinant") {
        for (int n : {2, 4, 6, 8, 10, 12}) {
            for (int t = 0; t < 20; ++t) {
                Eigen::MatrixXd a = random_antisymmetric(n, rng);
                double pf = pfaffian(a), det = a.determinant();
                CHECK(std::abs(pf * pf - det) <= 1e-10 * std::max(1.0, std::abs(det)));
            }
        }
    }
    SUBCASE("both algorithms agree") {
        Eigen::MatrixXd a = random_antisymmetric(8, rng);
        Eigen::MatrixXd big = Eigen::MatrixXd::Zero(10, 10);
        big.topLeftCorner(8, 8) = a;
        big(8, 9) = 1.0;
        big(9, 8) = -1.0;
        CHECK(pfaffian(big) == doctest::Approx(pfaffian(a)).epsilon(1e-12));
    }
    SUBCASE("expansion in the algebra") {
        for (int n : {2, 4, 6}) {
            Eigen::MatrixXd a = random_antisymmetric(n, rng);
            CHECK(fermionic_gaussian_expanded(a) == doctest::Approx(pfaffian(a)).epsilon(1e-12));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(pfaffian(Eigen::MatrixXd::Zero(3, 3)), OddDimensionError);
        Eigen::Matrix2d s;
        s << 0, 1, 1, 0;
        CHECK_THROWS_AS(pfaffian(s), AsymmetryError);
    }
}

TEST_CASE("auxiliary elimination") {
    SUBCASE("completing the square") {
        AuxiliaryPolynomial ap(2, {"x"});
        const double a = 3.0, b = -1.2;
        ap.add_product(0, 0, GrassmannElement::scalar(2, 0.5 * a));
        ap.add_linear(0, GrassmannElement::scalar(2, b));
        auto e = eliminate_auxiliary(ap, "x");
        CHECK(e.result.c.body() == doctest::Approx(-b * b / (2 * a)));
        CHECK(e.v[0].body() == doctest::Approx(-b / a));
        CHECK(e.result.size() == 0);
    }
    SUBCASE("Grassmann-valued linear term") {
        // ½x² + θ0θ1 x  →  −½(θ0θ1)² = 0, solution x = −θ0θ1
        AuxiliaryPolynomial ap(2, {"x"});
        ap.add_product(0, 0, GrassmannElement::scalar(2, 0.5));
        ap.add_linear(0, th(2, 0) * th(2, 1));
        auto e = eliminate_auxiliary(ap, "x");
        CHECK(e.result.c.is_zero());
        CHECK(e.v[0].coefficient(0b11) == -1.0);
    }
    SUBCASE("nilpotent quadratic coefficient") {
        // ½(1 + θ0θ1)x² + θ2θ3 x → −½ (θ2θ3)² (1 − θ0θ1) = 0, x = −(1 − θ0θ1)θ2θ3
        AuxiliaryPolynomial ap(4, {"x"});
        ap.add_product(0, 0, (GrassmannElement::scalar(4, 1.0) + th(4, 0) * th(4, 1)) * 0.5);
        ap.add_linear(0, th(4, 2) * th(4, 3));
        auto e = eliminate_auxiliary(ap, "x");
        CHECK(e.v[0].coefficient(0b1100) == -1.0);
        CHECK(e.v[0].coefficient(0b1111) == 1.0);
    }
    SUBCASE("order of two groups does not matter") {
        const int n = 4;
        AuxiliaryPolynomial ap(n, {"x", "y", "y"});
        ap.add_product(0, 0, GrassmannElement::scalar(n, 1.1) + th(n, 0) * th(n, 1));
        ap.add_product(1, 1, GrassmannElement::scalar(n, -0.8));
        ap.add_product(2, 2, GrassmannElement::scalar(n, 0.6) + th(n, 2) * th(n, 3) * 0.3);
        ap.add_product(0, 1, GrassmannElement::scalar(n, 0.4));
        ap.add_product(0, 2, th(n, 1) * th(n, 3));
        ap.add_linear(0, th(n, 0) * th(n, 2));
        ap.add_linear(1, th(n, 1) * th(n, 2) - th(n, 0) * th(n, 3));
        ap.add_linear(2, GrassmannElement::scalar(n, 0.25));
        auto xy = eliminate_auxiliary(eliminate_auxiliary(ap, "x").result, "y").result.c;
        auto yx = eliminate_auxiliary(eliminate_auxiliary(ap, "y").result, "x").result.c;
        CHECK(max_abs_diff(xy, yx) < 1e-14);
    }
    SUBCASE("delta pair") {
        // ½k p m + ½β p + ½γ m: δ(k m + β) fixes m = −β/k, leaving −βγ/(2k)
        const int n = 4;
        AuxiliaryPolynomial ap(n, {"p", "m"});
        const double k = 1.7;
        auto beta = th(n, 0) * th(n, 1), gamma = th(n, 2) * th(n, 3);
        ap.add_product(0, 1, GrassmannElement::scalar(n, 0.5 * k));
        ap.add_linear(0, beta * 0.5);
        ap.add_linear(1, gamma * 0.5);
        auto e = eliminate_delta_pair(ap, "p", "m");
        CHECK(e.result.size() == 0);
        CHECK(e.dropped_residual < 1e-15);
        CHECK(max_abs_diff(e.result.c, beta * gamma * (-0.5 / k)) < 1e-15);
    }
    SUBCASE("singular body") {
        AuxiliaryPolynomial ap(2, {"x"});
        ap.add_product(0, 0, th(2, 0) * th(2, 1));
        CHECK_THROWS_AS(eliminate_auxiliary(ap, "x"), SingularBodyError);
    }
}
