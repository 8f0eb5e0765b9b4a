#include <cmath>
#include <random>

#include "doctest.h"
#include "ggred/fields.hpp"
#include "ggred/models.hpp"

using namespace ggred;

namespace {

double max_abs(const Tensor4<double>& a, const Tensor4<double>& b) { return max_abs_diff(a, b); }

Eigen::MatrixXd orthonormal_quotient_frame(const ChartField& gt, const Eigen::VectorXd& q) {
    Eigen::MatrixXd g = metric_at<double>(gt, q);
    return gram_schmidt(Eigen::MatrixXd::Identity(g.rows(), g.cols()), g);
}

}  // namespace

TEST_CASE("extended action validation") {
    std::mt19937_64 rng(1);
    SUBCASE("untwisted Hopf") {
        auto scn = hopf_quotient(0.0);
        auto v = validate_extended_action(scn.action, scn.ctx, scn.ctx.chart().sample(10, rng));
        CHECK(v.worst_identity() == 0.0);
        CHECK(v.min_singular > 0.5);
    }
    SUBCASE("twisted Hopf with solved ξ") {
        for (double lam : {0.7, -1.3, 2.0}) {
            auto scn = hopf_quotient(lam);
            auto v = validate_extended_action(scn.action, scn.ctx, scn.ctx.chart().sample(10, rng));
            CHECK(v.worst_identity() < 1e-8);
        }
    }
    SUBCASE("non-invariant exact ξ with H = 0") {
        auto scn = hopf_quotient(0.0);
        auto chart = scn.ctx.g().chart_ptr();
        scn.action.xi[0] = ChartField::make(chart, Valence::covector(), [](const auto& x) {
            using S = typename std::decay_t<decltype(x)>::Scalar;
            VecX<S> v(3);
            v << cos(x(1)), S(0.0), S(0.0);  // not closed, not invariant
            return v;
        });
        auto v = validate_extended_action(scn.action, scn.ctx, chart->sample(10, rng));
        CHECK(v.killing < 1e-12);
        CHECK(v.equivariance > 1e-3);
    }
    SUBCASE("constructed violations are named") {
        auto base = hopf_quotient(0.0);
        auto chart = base.ctx.g().chart_ptr();
        auto pts = chart->sample(8, rng);

        auto iso = base.action;
        iso.xi[0] = constant_field(chart, Valence::covector(), Eigen::Vector3d(0.0, 1.0, 0.0));
        auto vi = validate_extended_action(iso, base.ctx, pts);
        CHECK(vi.failed(1e-8) == std::vector<std::string>{"isotropy"});

        auto flux = hopf_quotient(1.0);
        auto eq = flux.action;
        eq.xi[0] = constant_field(chart, Valence::covector(), Eigen::Vector3d::Zero());
        auto ve = validate_extended_action(eq, flux.ctx, pts);
        CHECK(ve.failed(1e-8) == std::vector<std::string>{"equivariance"});

        auto inv = base.action;
        inv.v[0] = constant_field(chart, Valence::vector(), Eigen::Vector3d(1.0, 0.0, 0.0));
        inv.xi[0] = constant_field(chart, Valence::covector(), Eigen::Vector3d::Zero());
        auto vk = validate_extended_action(inv, base.ctx, pts);
        CHECK(vk.failed(1e-8) == std::vector<std::string>{"invariance"});

        CHECK(validate_extended_action(base.action, base.ctx, pts).failed(1e-8).empty());
    }
    SUBCASE("every scenario") {
        for (auto scn : {product_quotient(0.8), hopf_torus_quotient(0.9, 0.4, 0.3), kahler_hopf_quotient()}) {
            auto pts = scn.ctx.chart().sample(10, rng);
            auto v = validate_extended_action(scn.action, scn.ctx, pts);
            CHECK(v.worst_identity() < 1e-8);
            auto qv = validate_quotient(scn, scn.quotient->sample(10, rng, 0.05));
            CHECK(qv.section_roundtrip < 1e-10);
            CHECK(qv.vertical_kernel < 1e-10);
            CHECK(qv.on_locus < 1e-10);
            CHECK(qv.dim_mismatch == 0);
        }
    }
}

TEST_CASE("reduction matrices and horizontal frames") {
    std::mt19937_64 rng(2);
    auto scn = hopf_quotient(1.1);
    for (const auto& x : scn.ctx.chart().sample(10, rng, 0.05)) {
        auto m = reduction_matrices(scn.action, scn.ctx, x);
        CHECK((m.t - m.t.transpose()).norm() < 1e-12);
        CHECK((m.t - m.t_minus).norm() < 1e-12);
        CHECK(m.t.llt().info() == Eigen::Success);
        auto [tp, tm] = horizontal_frames(scn.action, scn.ctx, x);
        REQUIRE(tp.cols() == 2);
        REQUIRE(tm.cols() == 2);
        Eigen::MatrixXd g = metric_at<double>(scn.ctx.g(), x);
        CHECK((tp.transpose() * g * tp - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-10);
        CHECK((constraint_rows(scn.action, scn.ctx, 1, x) * tp).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((constraint_rows(scn.action, scn.ctx, -1, x) * tm).cwiseAbs().maxCoeff() < 1e-10);
        // τ₊ ≠ τ₋: the projector difference has a nonzero principal angle.
        Eigen::MatrixXd pp = tp * tp.transpose() * g, pm = tm * tm.transpose() * g;
        CHECK((pp - pm).norm() > 1e-3);
    }
    SUBCASE("ξ = 0 gives the orthogonal complement") {
        auto flat = hopf_quotient(0.0);
        Eigen::Vector3d x(0.4, 0.1, -0.2);
        auto [tp, tm] = horizontal_frames(flat.action, flat.ctx, x);
        Eigen::MatrixXd g = metric_at<double>(flat.ctx.g(), x);
        Eigen::Vector3d v(0, 1, 1);
        CHECK((tp.transpose() * g * v).norm() < 1e-12);
        CHECK((tp * tp.transpose() - tm * tm.transpose()).norm() < 1e-12);
    }
}

TEST_CASE("curvature of the horizontal distributions") {
    std::mt19937_64 rng(3);
    SUBCASE("product bundle is flat") {
        auto scn = product_quotient(0.0);
        for (const auto& x : scn.ctx.chart().sample(5, rng, 0.05)) {
            auto [tp, tm] = horizontal_frames(scn.action, scn.ctx, x);
            auto om = omega_curvature(scn.action, scn.ctx, 1, x, tp);
            CHECK(om.lemma[0].cwiseAbs().maxCoeff() < 1e-12);
            CHECK(om.direct[0].cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("untwisted Hopf connection") {
        auto scn = hopf_quotient(0.0);
        Eigen::Vector3d x(0.6, 0.3, -0.2);
        auto [tp, tm] = horizontal_frames(scn.action, scn.ctx, x);
        auto om = omega_curvature(scn.action, scn.ctx, 1, x, tp);
        // θ = g(V)/|V|² = cos²η dξ1 + sin²η dξ2; dθ on an orthonormal horizontal pair
        // has magnitude 2 (the Hopf fibration has curvature form of norm 2).
        CHECK(std::abs(om.direct[0](0, 1)) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(om.residual() < 1e-10);
    }
    SUBCASE("lemma against direct curvature, twisted") {
        for (auto scn : {hopf_quotient(1.3), product_quotient(0.7), hopf_torus_quotient(0.9, 0.4, 0.3)}) {
            for (const auto& x : scn.ctx.chart().sample(5, rng, 0.05)) {
                auto [tp, tm] = horizontal_frames(scn.action, scn.ctx, x);
                CHECK(omega_curvature(scn.action, scn.ctx, 1, x, tp).residual() < 1e-8);
                CHECK(omega_curvature(scn.action, scn.ctx, -1, x, tm).residual() < 1e-8);
                auto [res, scale] = connection_along_orbit_residual(scn.action, scn.ctx, x, tm);
                CHECK(res < 1e-8);
            }
        }
    }
}

TEST_CASE("reduced metric and flux") {
    std::mt19937_64 rng(4);
    SUBCASE("Hopf base is the sphere of radius one half") {
        auto scn = hopf_quotient(0.0);
        auto gt = reduced_metric(scn);
        for (const auto& q : scn.quotient->sample(5, rng, 0.05)) {
            Eigen::MatrixXd g = metric_at<double>(gt, q);
            double s = std::sin(2 * q(0));
            CHECK(g(0, 0) == doctest::Approx(1.0));
            CHECK(std::abs(g(0, 1)) < 1e-12);
            CHECK(g(1, 1) == doctest::Approx(0.25 * s * s));
            auto r = riemann(gt, q);
            Eigen::MatrixXd e = orthonormal_quotient_frame(gt, q);
            CHECK(contract_frame(r, e)(0, 1, 1, 0) == doctest::Approx(4.0).epsilon(1e-8));
        }
    }
    SUBCASE("tau plus and tau minus give the same metric") {
        for (auto scn : {hopf_quotient(1.7), hopf_torus_quotient(0.9, 0.4, 0.3), product_quotient(0.6)}) {
            auto gp = reduced_metric(scn, 1), gm = reduced_metric(scn, -1);
            for (const auto& q : scn.quotient->sample(5, rng, 0.05)) {
                Eigen::MatrixXd a = metric_at<double>(gp, q), b = metric_at<double>(gm, q);
                CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6);
                CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().minCoeff() > 0.0);
            }
        }
    }
    SUBCASE("two dimensional quotients carry no flux") {
        auto ht = reduced_flux(hopf_quotient(1.3));
        for (const auto& q : ht.chart().sample(5, rng, 0.05)) CHECK(ht(q).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("S3 x T2 has nonzero reduced flux") {
        auto scn = hopf_torus_quotient(0.9, 0.4, 0.3);
        auto ht = reduced_flux(scn);
        auto rctx = reduced_context(scn);
        double biggest = 0.0;
        auto pts = scn.quotient->sample(5, rng, 0.05);
        for (const auto& q : pts) biggest = std::max(biggest, ht(q).cwiseAbs().maxCoeff());
        CHECK(biggest > 1e-2);
        auto v = rctx.validate(pts);
        CHECK(v.h_antisymmetry < 1e-12);
        CHECK(v.dh < 1e-8);
    }
}

TEST_CASE("reduced Bismut connection") {
    std::mt19937_64 rng(5);
    for (auto scn : {hopf_quotient(0.0), hopf_quotient(1.2), product_quotient(0.8),
                     hopf_torus_quotient(0.9, 0.4, 0.3), kahler_hopf_quotient()}) {
        auto rctx = reduced_context(scn);
        for (int t = 0; t < 3; ++t) {
            Eigen::VectorXd q = scn.quotient->sample(1, rng, 0.05)[0];
            auto X = random_vector_field(scn.quotient, rng), Y = random_vector_field(scn.quotient, rng),
                 Z = random_vector_field(scn.quotient, rng);
            double amb = reduced_bismut(scn, X, Y, Z, q);
            double dir = reduced_bismut_direct(rctx, X, Y, Z, q);
            CHECK(std::abs(amb - dir) < 1e-6);
        }
    }
}

TEST_CASE("reduced curvature") {
    std::mt19937_64 rng(6);
    SUBCASE("O'Neill on the untwisted Hopf fibration") {
        auto scn = hopf_quotient(0.0);
        auto rctx = reduced_context(scn);
        for (const auto& q : scn.quotient->sample(5, rng, 0.05)) {
            Eigen::MatrixXd e = orthonormal_quotient_frame(rctx.g(), q);
            auto thm = reduced_curvature_quotient(scn, q, e);
            auto dir = reduced_curvature_direct(rctx, q, e);
            auto one = oneill_curvature(scn, q, e);
            CHECK(max_abs(thm, dir) < 1e-6);
            CHECK(max_abs(one, dir) < 1e-6);
            CHECK(dir(0, 1, 1, 0) == doctest::Approx(4.0).epsilon(1e-8));
        }
    }
    SUBCASE("ambient formula against the quotient chart") {
        for (auto scn : {hopf_quotient(1.2), product_quotient(0.8), hopf_torus_quotient(0.9, 0.4, 0.3)}) {
            auto rctx = reduced_context(scn);
            for (const auto& q : scn.quotient->sample(3, rng, 0.05)) {
                Eigen::MatrixXd e = orthonormal_quotient_frame(rctx.g(), q);
                CHECK(max_abs(reduced_curvature_quotient(scn, q, e), reduced_curvature_direct(rctx, q, e)) < 1e-6);
            }
        }
    }
}
