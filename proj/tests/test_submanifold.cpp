#include <cmath>
#include <random>

#include "doctest.h"
#include "ggred/fields.hpp"
#include "ggred/models.hpp"

using namespace ggred;

namespace {

// Unit S³ ⊂ R⁴ in Hopf-type coordinates with H = c dx0∧dx1∧dx2, whose
// pullback to N does not vanish.
SubmanifoldScenario s3_in_r4(double c) {
    auto chart = make_chart("r4", Eigen::Vector4d::Constant(-2.0), Eigen::Vector4d::Constant(2.0));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(64);
    add_form3<double>(h, 4, 0, 1, 2, c);
    GeneralizedMetric ctx(euclidean_metric(chart), constant_field(chart, Valence::form(3), h));
    auto sigma = ChartField::make(chart, Valence::scalar(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out(1);
        out(0) = x.squaredNorm() - 1.0;
        return out;
    });
    auto nchart = make_chart("s3", Eigen::Vector3d(0.0, -3.0, -3.0), Eigen::Vector3d(M_PI / 2, 3.0, 3.0));
    auto embed = CoordinateMap::make(nchart, 4, [](const auto& u) {
        using S = typename std::decay_t<decltype(u)>::Scalar;
        VecX<S> x(4);
        x << cos(u(0)) * cos(u(1)), cos(u(0)) * sin(u(1)), sin(u(0)) * cos(u(2)), sin(u(0)) * sin(u(2));
        return x;
    });
    return SubmanifoldScenario{"s3_in_r4", ctx, SectionData{{sigma}}, nchart, embed};
}

Eigen::MatrixXd orthonormal_frame(const ChartField& g, const Eigen::VectorXd& u) {
    Eigen::MatrixXd gm = metric_at<double>(g, u);
    return gram_schmidt(Eigen::MatrixXd::Identity(gm.rows(), gm.cols()), gm);
}

}  // namespace

TEST_CASE("T matrix examples") {
    auto plane = plane_in_flat(0.0);
    auto t1 = t_matrix(plane.section, plane.ctx, Eigen::Vector3d(0, 0.3, 0.2));
    CHECK(t1.t_up(0, 0) == doctest::Approx(1.0));
    auto sphere = sphere_in_flat(0.0);
    Eigen::Vector3d p(std::sin(1.0) * std::cos(0.5), std::sin(1.0) * std::sin(0.5), std::cos(1.0));
    auto t2 = t_matrix(sphere.section, sphere.ctx, p);
    CHECK(t2.t_up(0, 0) == doctest::Approx(4.0));
    CHECK(t2.t_down(0, 0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(t_matrix(sphere.section, sphere.ctx, Eigen::Vector3d(0.1, 0.1, 0.1)), DomainError);

    auto chart = make_chart("r3", Eigen::Vector3d::Constant(-2.0), Eigen::Vector3d::Constant(2.0));
    SectionData two{{ChartField::make(chart, Valence::scalar(),
                                      [](const auto& x) {
                                          using S = typename std::decay_t<decltype(x)>::Scalar;
                                          VecX<S> o(1);
                                          o(0) = x(0);
                                          return o;
                                      }),
                     ChartField::make(chart, Valence::scalar(), [](const auto& x) {
                         using S = typename std::decay_t<decltype(x)>::Scalar;
                         VecX<S> o(1);
                         o(0) = x(1);
                         return o;
                     })}};
    auto t3 = t_matrix(two, GeneralizedMetric(euclidean_metric(chart)), Eigen::Vector3d(0, 0, 0.7));
    CHECK((t3.t_up - Eigen::Matrix2d::Identity()).norm() < 1e-14);
}

TEST_CASE("scenario validation") {
    std::mt19937_64 rng(1);
    for (const auto& scn : {sphere_in_flat(0.5), plane_in_flat(1.0), s3_in_r4(0.7)}) {
        auto v = validate_submanifold(scn, scn.nchart->sample(10, rng, 0.05));
        CHECK(v.on_locus < 1e-10);
        CHECK(v.min_singular > 1e-3);
        CHECK(v.dsigma_singular > 1e-3);
    }
}

TEST_CASE("reduced connection on N") {
    std::mt19937_64 rng(2);
    for (const auto& scn : {sphere_in_flat(0.0), sphere_in_flat(2.0), plane_in_flat(1.0), s3_in_r4(0.7)}) {
        auto induced = induced_context(scn);
        for (int t = 0; t < 4; ++t) {
            Eigen::VectorXd u = scn.nchart->sample(1, rng, 0.05)[0];
            auto X = random_vector_field(scn.nchart, rng), Y = random_vector_field(scn.nchart, rng),
                 Z = random_vector_field(scn.nchart, rng);
            double a = reduced_connection_sub(scn, X, Y, Z, u);
            double b = reduced_connection_sub(scn, X, Y, Z, u, Extension::Tubular);
            double c = reduced_connection_direct(induced, X, Y, Z, u);
            CHECK(std::abs(a - b) < 1e-8);
            CHECK(std::abs(a - c) < 1e-6);
            // the full reduced derivative is tangent and agrees with the coefficient form
            Eigen::VectorXd d1 = reduced_derivative_sub(scn, X, Y, u);
            Eigen::VectorXd d2 = reduced_derivative_coefficients(scn, X, Y, u);
            CHECK((d1 - d2).norm() < 1e-8);
            Eigen::VectorXd x0 = scn.embed(u);
            Eigen::MatrixXd ds = jacobian(scn.section.sigma[0], VecX<double>(x0));
            CHECK(std::abs((ds * d1)(0)) < 1e-8);
            // metric compatibility with the induced metric
            auto gyz = [&](const auto& q) {
                using S = typename std::decay_t<decltype(q)>::Scalar;
                VecX<S> o(1);
                o(0) = Y(q).dot(metric_at(induced.g(), q) * Z(q));
                return o;
            };
            double lhs = directional(gyz, VecX<double>(u), VecX<double>(X(u)))(0);
            double rhs = a + reduced_connection_sub(scn, X, Z, Y, u);
            CHECK(std::abs(lhs - rhs) < 1e-8);
        }
    }
}

TEST_CASE("flat connection on a hyperplane") {
    auto scn = plane_in_flat(0.0);
    auto chart = scn.nchart;
    Eigen::VectorXd u = Eigen::Vector2d(0.2, -0.4);
    auto e0 = coordinate_vector(chart, 0), e1 = coordinate_vector(chart, 1);
    CHECK(reduced_connection_sub(scn, e0, e1, e1, u) == 0.0);
    CHECK(reduced_connection_sub(scn, e1, e0, e0, u) == 0.0);
}

TEST_CASE("Levi-Civita of the round sphere") {
    auto scn = sphere_in_flat(0.0);
    Eigen::VectorXd u = Eigen::Vector2d(M_PI / 4, 0.0);
    auto dth = coordinate_vector(scn.nchart, 0), dph = coordinate_vector(scn.nchart, 1);
    // (∇_{∂φ}∂φ, ∂θ) = −sinθ cosθ, (∇_{∂θ}∂φ, ∂φ) = sinθ cosθ
    double sc = std::sin(M_PI / 4) * std::cos(M_PI / 4);
    for (double c : {0.0, 0.5, 2.0}) {
        auto s = sphere_in_flat(c);
        CHECK(reduced_connection_sub(s, dph, dph, dth, u) == doctest::Approx(-sc));
        CHECK(reduced_connection_sub(s, dth, dph, dph, u) == doctest::Approx(sc));
        CHECK(std::abs(reduced_connection_sub(s, dth, dth, dth, u)) < 1e-14);
    }
}

TEST_CASE("swap identity between the two Bismut connections") {
    std::mt19937_64 rng(3);
    for (const auto& scn : {sphere_in_flat(1.5), s3_in_r4(0.7)}) {
        for (const auto& u : scn.nchart->sample(5, rng, 0.05)) {
            Eigen::VectorXd x = scn.embed(u);
            std::normal_distribution<double> nd;
            Eigen::VectorXd a(u.size()), b(u.size());
            for (Eigen::Index i = 0; i < u.size(); ++i) { a(i) = nd(rng); b(i) = nd(rng); }
            Eigen::VectorXd y = push_forward(scn, u, a), z = push_forward(scn, u, b);
            Eigen::VectorXd lhs = sigma_hessian_pairing(scn, -1, x, y, z);
            Eigen::VectorXd rhs = sigma_hessian_pairing(scn, 1, x, z, y);
            CHECK((lhs - rhs).norm() < 1e-8);
        }
    }
}

TEST_CASE("reduced curvature on N") {
    std::mt19937_64 rng(4);
    SUBCASE("flat ambient, plane") {
        auto scn = plane_in_flat(1.0);
        Eigen::VectorXd u = Eigen::Vector2d(0.1, 0.3);
        auto r = reduced_curvature_sub(scn, scn.embed(u), push_forward(scn, u, Eigen::Matrix2d::Identity()));
        CHECK(max_abs(r) < 1e-14);
    }
    SUBCASE("round sphere, independent of the flux") {
        for (double c : {0.0, 0.5, 2.0}) {
            auto scn = sphere_in_flat(c);
            auto induced = induced_context(scn);
            for (const auto& u : scn.nchart->sample(5, rng, 0.05)) {
                Eigen::MatrixXd e = orthonormal_frame(induced.g(), u);
                auto thm = reduced_curvature_sub(scn, scn.embed(u), push_forward(scn, u, e));
                CHECK(thm(0, 1, 1, 0) == doctest::Approx(1.0).epsilon(1e-8));
                CHECK(max_abs_diff(thm, reduced_curvature_direct(induced, u, e)) < 1e-6);
                if (c == 0.0) CHECK(max_abs_diff(thm, gauss_curvature(scn, u, e)) < 1e-6);
            }
        }
    }
    SUBCASE("S3 in R4 with a flux that survives on N") {
        auto scn = s3_in_r4(0.7);
        auto induced = induced_context(scn);
        double hmax = 0.0;
        for (const auto& u : scn.nchart->sample(5, rng, 0.05)) {
            hmax = std::max(hmax, induced.h()(u).cwiseAbs().maxCoeff());
            Eigen::MatrixXd e = orthonormal_frame(induced.g(), u);
            auto thm = reduced_curvature_sub(scn, scn.embed(u), push_forward(scn, u, e));
            CHECK(max_abs_diff(thm, reduced_curvature_direct(induced, u, e)) < 1e-6);
        }
        CHECK(hmax > 1e-2);
    }
    SUBCASE("tangency is enforced") {
        auto scn = sphere_in_flat(0.0);
        Eigen::Vector3d x(0, 0, 1);
        Eigen::MatrixXd frame(3, 2);
        frame << 1, 0, 0, 1, 0.5, 0;
        CHECK_THROWS_AS(reduced_curvature_sub(scn, x, frame), TangencyError);
    }
}
