#include <cmath>
#include <random>

#include "doctest.h"
#include "ggred/fields.hpp"
#include "ggred/models.hpp"

using namespace ggred;

namespace {

// Left multiplication by the quaternion j on R⁴ = (1, i, j, k).
ChartField quaternion_j(ChartPtr chart) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 2) = -1.0;
    m(1, 3) = 1.0;
    m(2, 0) = 1.0;
    m(3, 1) = -1.0;
    return constant_field(std::move(chart), Valence::endomorphism(), Eigen::Map<Eigen::VectorXd>(m.data(), 16));
}

ChartField sphere_structure(ChartPtr chart) {
    const int n = chart->dim();
    return endomorphism_field(std::move(chart), [n](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = MatX<S>::Zero(n, n);
        m(1, 0) = 1.0 / sin(x(0));
        m(0, 1) = -sin(x(0));
        return m;
    });
}

}  // namespace

TEST_CASE("bihermitian validation") {
    std::mt19937_64 rng(3);
    SUBCASE("flat R4 Kähler") {
        auto scn = kahler_hopf_quotient();
        auto bh = kahler_structures(scn.ctx.g().chart_ptr());
        auto v = validate_bihermitian(bh, scn.ctx, scn.ctx.chart().sample(6, rng), rng);
        CHECK(v.worst() < 1e-12);
    }
    SUBCASE("S3 x S1") {
        auto s = s3xs1_gk();
        auto pts = s.ctx.chart().sample(12, rng, 0.05);
        auto v = validate_bihermitian(s.bh, s.ctx, pts, rng);
        CHECK(v.square < 1e-8);
        CHECK(v.compatibility < 1e-8);
        CHECK(v.nijenhuis < 1e-8);
        CHECK(v.parallel_plus < 1e-8);
        CHECK(v.parallel_minus < 1e-8);
        CHECK(v.h_type < 1e-8);
        // J± are distinct
        CHECK((endomorphism_at<double>(s.bh.jplus, pts[0]) - endomorphism_at<double>(s.bh.jminus, pts[0]))
                  .norm() > 0.1);
    }
    SUBCASE("S3 x S1 with the wrong sign of H") {
        auto s = s3xs1_gk(-2.0, true);
        auto v = validate_bihermitian(s.bh, s.ctx, s.ctx.chart().sample(6, rng, 0.05), rng);
        CHECK(v.nijenhuis < 1e-8);
        CHECK(v.parallel_plus > 1e-2);
        CHECK(v.parallel_minus > 1e-2);
    }
    SUBCASE("perturbed J is flagged") {
        auto scn = kahler_hopf_quotient();
        auto chart = scn.ctx.g().chart_ptr();
        auto bad = endomorphism_field(chart, [](const auto& x) {
            using S = typename std::decay_t<decltype(x)>::Scalar;
            MatX<S> m = MatX<S>::Zero(4, 4);
            m(1, 0) = 1.0;
            m(0, 1) = -1.0;
            m(3, 2) = 1.0;
            m(2, 3) = -1.0;
            m(0, 1) += 1e-3 * x(0);
            return m;
        });
        std::vector<Eigen::VectorXd> pts{Eigen::Vector4d(0.9, 0.1, -0.3, 0.2), Eigen::Vector4d(-1.2, 0.5, 0.4, 0.0)};
        auto v = validate_bihermitian(BiHermitianData{bad, bad}, scn.ctx, pts, rng);
        CHECK(v.square > 1e-4);
        CHECK(v.compatibility > 1e-4);
        CHECK(v.worst() > 1e-4);
    }
    SUBCASE("Nijenhuis of a non-integrable structure") {
        // J on R⁴ rotating (∂0, ∂1) by an angle depending on x2 and x3.
        auto scn = kahler_hopf_quotient();
        auto j = endomorphism_field(scn.ctx.g().chart_ptr(), [](const auto& x) {
            using S = typename std::decay_t<decltype(x)>::Scalar;
            S c = cos(x(2) * x(3)), s = sin(x(2) * x(3));
            MatX<S> r = MatX<S>::Identity(4, 4);
            r(0, 0) = c;
            r(0, 2) = -s;
            r(2, 0) = s;
            r(2, 2) = c;
            MatX<S> j0 = MatX<S>::Zero(4, 4);
            j0(1, 0) = 1.0;
            j0(0, 1) = -1.0;
            j0(3, 2) = 1.0;
            j0(2, 3) = -1.0;
            return MatX<S>(r * j0 * r.transpose());
        });
        Eigen::Vector4d p(0.2, -0.4, 0.7, 0.5);
        auto v = validate_bihermitian(BiHermitianData{j, j}, scn.ctx, {p}, rng);
        CHECK(v.square < 1e-12);
        CHECK(v.compatibility < 1e-12);
        CHECK(v.nijenhuis > 1e-3);
    }
}

TEST_CASE("GK reduction") {
    std::mt19937_64 rng(4);
    SUBCASE("Kähler Hopf quotient") {
        auto scn = kahler_hopf_quotient();
        auto bh = kahler_structures(scn.ctx.g().chart_ptr());
        auto qs = scn.quotient->sample(8, rng, 0.1);
        auto r = reduce_gk(scn, bh, qs, rng);
        CHECK(r.validation.worst() < 1e-6);
        CHECK(r.omega_type < 1e-6);
        for (const auto& q : qs) {
            auto [dp, dm] = check_tau_invariance(bh, scn.action, scn.ctx, scn.lift(q), &*scn.section);
            CHECK(dp < 1e-10);
            CHECK(dm < 1e-10);
        }
    }
    SUBCASE("J not preserving the horizontal distribution") {
        auto scn = kahler_hopf_quotient();
        auto jj = quaternion_j(scn.ctx.g().chart_ptr());
        auto qs = scn.quotient->sample(3, rng, 0.1);
        auto [dp, dm] = check_tau_invariance(BiHermitianData{jj, jj}, scn.action, scn.ctx, scn.lift(qs[0]),
                                             &*scn.section);
        CHECK(dp > 1e-2);
        CHECK(dm > 1e-2);
        CHECK_THROWS_AS(reduce_gk(scn, BiHermitianData{jj, jj}, qs, rng), ReductionConditionError);
    }
    SUBCASE("product recovers the structure on the base") {
        auto scn = product_quotient(0.0);
        auto j = sphere_structure(scn.ctx.g().chart_ptr());
        auto qs = scn.quotient->sample(6, rng, 0.1);
        auto r = reduce_gk(scn, BiHermitianData{j, j}, qs, rng);
        auto expect = sphere_structure(scn.quotient);
        for (const auto& q : qs) {
            Eigen::MatrixXd want = endomorphism_at<double>(expect, q);
            CHECK((endomorphism_at<double>(r.reduced.jplus, q) - want).cwiseAbs().maxCoeff() < 1e-10);
            CHECK((endomorphism_at<double>(r.reduced.jminus, q) - want).cwiseAbs().maxCoeff() < 1e-10);
        }
        CHECK(r.validation.worst() < 1e-8);
    }
    SUBCASE("naive extension fails once the twist is on") {
        auto scn = product_quotient(0.8);
        auto j = sphere_structure(scn.ctx.g().chart_ptr());
        CHECK_THROWS_AS(reduce_gk(scn, BiHermitianData{j, j}, scn.quotient->sample(3, rng, 0.1), rng),
                        ReductionConditionError);
    }
}

TEST_CASE("invariance defect does not depend on the basis") {
    std::mt19937_64 rng(5);
    auto scn = kahler_hopf_quotient();
    auto jj = quaternion_j(scn.ctx.g().chart_ptr());
    Eigen::VectorXd x = scn.lift(scn.quotient->sample(1, rng, 0.1)[0]);
    auto [tp, tm] = horizontal_frames(scn.action, scn.ctx, x, &*scn.section);
    Eigen::MatrixXd g = metric_at<double>(scn.ctx.g(), x);
    Eigen::MatrixXd jm = endomorphism_at<double>(jj, x);
    double ref = invariance_defect(jm, tp, g);
    for (double a : {0.3, 1.7, -2.2}) {
        Eigen::Matrix2d rot;
        rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
        CHECK(invariance_defect(jm, tp * rot, g) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(ref > 1e-2);
}
