#include <cmath>
#include <random>

#include "doctest.h"
#include "ggred/localization.hpp"
#include "ggred/models.hpp"
#include "ggred/parallel.hpp"

using namespace ggred;

namespace {

double quotient_mismatch(const QuotientScenario& scn, const Eigen::VectorXd& q,
                         EliminationOrder order = EliminationOrder::FieldFirst) {
    PointFrame f = quotient_point_frame(scn, q);
    auto res = localize_model(f, Model::II, order);
    const int m = scn.quotient_dim();
    auto expect = curvature_exponent(reduced_curvature_quotient(scn, q, Eigen::MatrixXd::Identity(m, m)), m);
    return max_abs_diff(res.exponent, expect);
}

double section_mismatch(const SubmanifoldScenario& scn, const Eigen::VectorXd& u) {
    PointFrame f = section_point_frame(scn, u);
    auto res = localize_model(f, Model::III);
    const int k = scn.nchart->dim();
    auto expect = curvature_exponent(reduced_curvature_sub(scn, f.x, f.zero_plus), k);
    return max_abs_diff(res.exponent, expect);
}

}  // namespace

TEST_CASE("Model II reproduces the reduced curvature") {
    std::mt19937_64 rng(21);
    std::vector<QuotientScenario> scns{product_quotient(0.0), product_quotient(0.7), hopf_quotient(0.0),
                                       hopf_quotient(1.3), hopf_torus_quotient(0.9, 0.4, -0.6)};
    for (const auto& scn : scns) {
        CAPTURE(scn.name);
        double worst = 0.0;
        for (const auto& q : scn.quotient->sample(10, rng, 0.1)) worst = std::max(worst, quotient_mismatch(scn, q));
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("Model II exponent is pure quartic") {
    std::mt19937_64 rng(22);
    auto scn = hopf_torus_quotient(0.9, 0.4, -0.6);
    for (const auto& q : scn.quotient->sample(5, rng, 0.1)) {
        auto res = localize_model(quotient_point_frame(scn, q), Model::II);
        for (int d : {0, 1, 2, 3}) CHECK(res.exponent.max_abs(d) <= 1e-12);
        CHECK(res.delta_residual <= 1e-12);
    }
}

TEST_CASE("stationary phi matches the closed form") {
    std::mt19937_64 rng(23);
    for (const auto& scn : {hopf_quotient(1.3), product_quotient(0.7), hopf_torus_quotient(0.9, 0.4, -0.6)}) {
        CAPTURE(scn.name);
        for (const auto& q : scn.quotient->sample(5, rng, 0.1)) {
            PointFrame f = quotient_point_frame(scn, q);
            auto res = localize_model(f, Model::II);
            auto closed = phi_pm_closed_form(f, zero_modes(f));
            REQUIRE(closed.size() == res.phi_pm.size());
            for (size_t a = 0; a < closed.size(); ++a) CHECK(max_abs_diff(closed[a], res.phi_pm[a]) <= 1e-8);
        }
    }
}

TEST_CASE("elimination order does not change the exponent") {
    std::mt19937_64 rng(24);
    auto scn = hopf_torus_quotient(0.9, 0.4, -0.6);
    for (const auto& q : scn.quotient->sample(5, rng, 0.1)) {
        PointFrame f = quotient_point_frame(scn, q);
        auto a = localize_model(f, Model::II, EliminationOrder::FieldFirst);
        auto b = localize_model(f, Model::II, EliminationOrder::PhiFirst);
        CHECK(max_abs_diff(a.exponent, b.exponent) <= 1e-10);
    }
}

TEST_CASE("mismatched zero modes are rejected") {
    auto scn = hopf_quotient(1.3);
    PointFrame f = quotient_point_frame(scn, Eigen::Vector2d(0.6, 0.3));
    std::swap(f.zero_plus, f.zero_minus);
    CHECK_THROWS_AS(localize_model(f, Model::II), FrameMismatchError);
    CHECK_THROWS_AS(quotient_point_frame(kahler_hopf_quotient(), Eigen::Vector2d(1.0, 0.5)), ScenarioError);
}

TEST_CASE("Model III reproduces the submanifold curvature") {
    std::mt19937_64 rng(25);
    for (double c : {0.0, 0.8, -1.5}) {
        for (const auto& scn : {sphere_in_flat(c), plane_in_flat(c)}) {
            CAPTURE(scn.name);
            CAPTURE(c);
            double worst = 0.0;
            for (const auto& u : scn.nchart->sample(10, rng, 0.1)) worst = std::max(worst, section_mismatch(scn, u));
            CHECK(worst <= 1e-6);
        }
    }
}

TEST_CASE("frame inverses") {
    std::mt19937_64 rng(26);
    auto scn = hopf_torus_quotient(0.9, 0.4, -0.6);
    for (const auto& q : scn.quotient->sample(4, rng, 0.1)) CHECK(frame_inverse_residual(quotient_point_frame(scn, q)) < 1e-12);
    auto sub = sphere_in_flat(0.8);
    for (const auto& u : sub.nchart->sample(4, rng, 0.1)) CHECK(frame_inverse_residual(section_point_frame(sub, u)) < 1e-12);
}

TEST_CASE("Gauss–Legendre integrates polynomials exactly") {
    auto [x, w] = gauss_legendre(6);
    CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK((w.array() * x.array().pow(10)).sum() == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
    CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("Pfaffian density agrees with the permutation expansion") {
    std::mt19937_64 rng(27);
    std::normal_distribution<double> nd;
    for (int d : {2, 4}) {
        // random array with the curvature symmetries
        Tensor4<double> r(d, d, d, d);
        r.setZero();
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = k + 1; l < d; ++l) {
                        double v = nd(rng);
                        r(i, j, k, l) = v;
                        r(j, i, k, l) = -v;
                        r(i, j, l, k) = -v;
                        r(j, i, l, k) = v;
                    }
        CHECK(pfaffian_density(r) == doctest::Approx(pfaffian_density_expansion(r)).epsilon(1e-12));
    }
    // unit S²: density is the Gauss curvature
    Tensor4<double> s2(2, 2, 2, 2);
    s2.setZero();
    s2(0, 1, 1, 0) = s2(1, 0, 0, 1) = 1.0;
    s2(0, 1, 0, 1) = s2(1, 0, 1, 0) = -1.0;
    CHECK(pfaffian_density(s2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(pfaffian_density(Tensor4<double>(3, 3, 3, 3)), OddDimensionError);
}

TEST_CASE("Euler characteristic") {
    CHECK(euler_characteristic(euler_sphere(), 16) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(std::abs(euler_characteristic(euler_torus(), 8)) < 1e-10);
    CHECK(euler_characteristic(euler_sphere_product(), 8, -1, default_jobs()) == doctest::Approx(4.0).epsilon(0.02));
    // same value with the other connection and any thread count
    CHECK(euler_characteristic(euler_sphere_product(), 8, 1, 1) ==
          doctest::Approx(euler_characteristic(euler_sphere_product(), 8, 1, 3)).epsilon(1e-14));
    CHECK(std::abs(euler_characteristic(euler_s3xs1(2.0), 8, -1, default_jobs())) < 1e-6);
}
