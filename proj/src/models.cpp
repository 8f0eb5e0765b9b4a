#include "ggred/models.hpp"

#include <cmath>

#include "ggred/fields.hpp"

namespace ggred {

namespace {

constexpr double kHalfPi = M_PI / 2;

ChartPtr hopf_chart() {
    return make_chart("s3_hopf", Eigen::Vector3d(0.0, -4.0, -4.0), Eigen::Vector3d(kHalfPi, 4.0, 4.0));
}

template <typename S>
MatX<S> hopf_block(const S& eta) {
    MatX<S> m = MatX<S>::Zero(3, 3);
    m(0, 0) = S(1.0);
    m(1, 1) = cos(eta) * cos(eta);
    m(2, 2) = sin(eta) * sin(eta);
    return m;
}

ChartField unit_vector(ChartPtr chart, std::initializer_list<int> ones) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(chart->dim());
    for (int i : ones) v(i) = 1.0;
    return constant_field(std::move(chart), Valence::vector(), v);
}

}  // namespace

GeneralizedMetric hopf_s3_metric(double lambda) {
    auto chart = hopf_chart();
    auto g = ChartField::make(chart, Valence::bilinear(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        return flatten<S>(hopf_block(x(0)));
    });
    auto h = ChartField::make(chart, Valence::form(3), [lambda](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> v = VecX<S>::Zero(27);
        add_form3<S>(v, 3, 0, 1, 2, lambda * sin(x(0)) * cos(x(0)));
        return v;
    });
    return GeneralizedMetric(g, h);
}

QuotientScenario hopf_quotient(double lambda) {
    auto ctx = hopf_s3_metric(lambda);
    auto chart = ctx.g().chart_ptr();
    auto xi = ChartField::make(chart, Valence::covector(), [lambda](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        S f = 0.5 * lambda * sin(x(0)) * sin(x(0));
        VecX<S> v(3);
        v << S(0.0), f, -f;
        return v;
    });
    auto quotient = make_chart("hopf_base", Eigen::Vector2d(0.0, -4.0), Eigen::Vector2d(kHalfPi, 4.0));
    auto project = CoordinateMap::make(chart, 2, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> q(2);
        q << x(0), x(1) - x(2);
        return q;
    });
    auto lift = CoordinateMap::make(quotient, 3, [](const auto& q) {
        using S = typename std::decay_t<decltype(q)>::Scalar;
        VecX<S> x(3);
        x << q(0), q(1), S(0.0);
        return x;
    });
    return QuotientScenario{"hopf", ctx, ExtendedAction{{unit_vector(chart, {1, 2})}, {xi}},
                            quotient, project, lift, std::nullopt};
}

QuotientScenario product_quotient(double c) {
    auto chart = make_chart("s2xs1", Eigen::Vector3d(0.0, -4.0, -4.0), Eigen::Vector3d(M_PI, 4.0, 4.0));
    auto g = ChartField::make(chart, Valence::bilinear(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = MatX<S>::Identity(3, 3);
        m(1, 1) = sin(x(0)) * sin(x(0));
        return flatten<S>(m);
    });
    auto h = ChartField::make(chart, Valence::form(3), [c](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> v = VecX<S>::Zero(27);
        add_form3<S>(v, 3, 0, 1, 2, c * sin(x(0)));
        return v;
    });
    auto xi = ChartField::make(chart, Valence::covector(), [c](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> v(3);
        v << S(0.0), -c * cos(x(0)), S(0.0);
        return v;
    });
    auto quotient = make_chart("s2", Eigen::Vector2d(0.0, -4.0), Eigen::Vector2d(M_PI, 4.0));
    auto project = CoordinateMap::make(chart, 2, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> q(2);
        q << x(0), x(1);
        return q;
    });
    auto lift = CoordinateMap::make(quotient, 3, [](const auto& q) {
        using S = typename std::decay_t<decltype(q)>::Scalar;
        VecX<S> x(3);
        x << q(0), q(1), S(0.0);
        return x;
    });
    return QuotientScenario{"product_qg", GeneralizedMetric(g, h),
                            ExtendedAction{{unit_vector(chart, {2})}, {xi}}, quotient, project, lift,
                            std::nullopt};
}

QuotientScenario hopf_torus_quotient(double lambda, double nu, double mu) {
    Eigen::VectorXd lo(5), hi(5);
    lo << 0.0, -4.0, -4.0, -4.0, -4.0;
    hi << kHalfPi, 4.0, 4.0, 4.0, 4.0;
    auto chart = make_chart("s3xt2", lo, hi);
    auto g = ChartField::make(chart, Valence::bilinear(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = MatX<S>::Identity(5, 5);
        m.topLeftCorner(3, 3) = hopf_block(x(0));
        return flatten<S>(m);
    });
    auto h = ChartField::make(chart, Valence::form(3), [lambda, mu](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> v = VecX<S>::Zero(125);
        add_form3<S>(v, 5, 0, 1, 2, lambda * sin(x(0)) * cos(x(0)));
        add_form3<S>(v, 5, 0, 3, 4, S(mu));
        return v;
    });
    auto xi = ChartField::make(chart, Valence::covector(), [lambda, nu](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        S f = 0.5 * lambda * sin(x(0)) * sin(x(0));
        VecX<S> v(5);
        v << S(0.0), f, -f, S(nu), S(0.0);
        return v;
    });
    Eigen::VectorXd qlo(4), qhi(4);
    qlo << 0.0, -4.0, -4.0, -4.0;
    qhi << kHalfPi, 4.0, 4.0, 4.0;
    auto quotient = make_chart("s2xt2", qlo, qhi);
    auto project = CoordinateMap::make(chart, 4, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> q(4);
        q << x(0), x(1) - x(2), x(3), x(4);
        return q;
    });
    auto lift = CoordinateMap::make(quotient, 5, [](const auto& q) {
        using S = typename std::decay_t<decltype(q)>::Scalar;
        VecX<S> x(5);
        x << q(0), q(1), S(0.0), q(2), q(3);
        return x;
    });
    return QuotientScenario{"hopf_torus", GeneralizedMetric(g, h),
                            ExtendedAction{{unit_vector(chart, {1, 2})}, {xi}}, quotient, project, lift,
                            std::nullopt};
}

QuotientScenario kahler_hopf_quotient() {
    auto chart = make_chart("r4", Eigen::Vector4d::Constant(-2.0), Eigen::Vector4d::Constant(2.0));
    auto g = euclidean_metric(chart);
    auto v = ChartField::make(chart, Valence::vector(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out(4);
        out << -x(1), x(0), -x(3), x(2);
        return out;
    });
    auto sigma = ChartField::make(chart, Valence::scalar(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out(1);
        out(0) = x.squaredNorm() - 1.0;
        return out;
    });
    auto quotient = make_chart("cp1", Eigen::Vector2d(0.0, -3.0), Eigen::Vector2d(M_PI, 3.0));
    auto project = CoordinateMap::make(chart, 2, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        S r1 = sqrt(x(0) * x(0) + x(1) * x(1));
        S r2 = sqrt(x(2) * x(2) + x(3) * x(3));
        VecX<S> q(2);
        q << 2.0 * atan2(r2, r1), atan2(x(3) * x(0) - x(2) * x(1), x(2) * x(0) + x(3) * x(1));
        return q;
    });
    auto lift = CoordinateMap::make(quotient, 4, [](const auto& q) {
        using S = typename std::decay_t<decltype(q)>::Scalar;
        S s = sin(0.5 * q(0));
        VecX<S> x(4);
        x << cos(0.5 * q(0)), S(0.0), s * cos(q(1)), s * sin(q(1));
        return x;
    });
    return QuotientScenario{"kahler_hopf", GeneralizedMetric(g), ExtendedAction{{v}, {zero_form(chart, 1)}},
                            quotient, project, lift, SectionData{{sigma}}};
}

GeneralizedMetric flat_flux_metric(double c) {
    auto chart = make_chart("r3", Eigen::Vector3d::Constant(-2.0), Eigen::Vector3d::Constant(2.0));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(27);
    add_form3<double>(h, 3, 0, 1, 2, c);
    return GeneralizedMetric(euclidean_metric(chart), constant_field(chart, Valence::form(3), h));
}

SubmanifoldScenario sphere_in_flat(double c) {
    auto ctx = flat_flux_metric(c);
    auto sigma = ChartField::make(ctx.g().chart_ptr(), Valence::scalar(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out(1);
        out(0) = x.squaredNorm() - 1.0;
        return out;
    });
    auto nchart = make_chart("s2", Eigen::Vector2d(0.0, -3.0), Eigen::Vector2d(M_PI, 3.0));
    auto embed = CoordinateMap::make(nchart, 3, [](const auto& u) {
        using S = typename std::decay_t<decltype(u)>::Scalar;
        VecX<S> x(3);
        x << sin(u(0)) * cos(u(1)), sin(u(0)) * sin(u(1)), cos(u(0));
        return x;
    });
    return SubmanifoldScenario{"sphere_in_flat", ctx, SectionData{{sigma}}, nchart, embed};
}

SubmanifoldScenario plane_in_flat(double c) {
    auto ctx = flat_flux_metric(c);
    auto sigma = ChartField::make(ctx.g().chart_ptr(), Valence::scalar(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> out(1);
        out(0) = x(0);
        return out;
    });
    auto nchart = make_chart("plane", Eigen::Vector2d(-1.5, -1.5), Eigen::Vector2d(1.5, 1.5));
    auto embed = CoordinateMap::make(nchart, 3, [](const auto& u) {
        using S = typename std::decay_t<decltype(u)>::Scalar;
        VecX<S> x(3);
        x << S(0.0), u(0), u(1);
        return x;
    });
    return SubmanifoldScenario{"plane_in_flat", ctx, SectionData{{sigma}}, nchart, embed};
}

namespace {

/// Quaternion product with components (1, i, j, k).
template <typename S>
VecX<S> quat_mul(const VecX<S>& p, const VecX<S>& q) {
    VecX<S> r(4);
    r(0) = p(0) * q(0) - p(1) * q(1) - p(2) * q(2) - p(3) * q(3);
    r(1) = p(0) * q(1) + p(1) * q(0) + p(2) * q(3) - p(3) * q(2);
    r(2) = p(0) * q(2) - p(1) * q(3) + p(2) * q(0) + p(3) * q(1);
    r(3) = p(0) * q(3) + p(1) * q(2) - p(2) * q(1) + p(3) * q(0);
    return r;
}

/// Columns ∂t, e1, e2, e3 in (η, ξ1, ξ2, t) components.
template <typename S>
MatX<S> s3xs1_frame(const VecX<S>& x, bool left) {
    S ce = cos(x(0)), se = sin(x(0));
    S c1 = cos(x(1)), s1 = sin(x(1)), c2 = cos(x(2)), s2 = sin(x(2));
    VecX<S> q(4), deta(4), dx1(4), dx2(4);
    q << ce * c1, ce * s1, se * c2, se * s2;
    deta << -se * c1, -se * s1, ce * c2, ce * s2;
    dx1 << -ce * s1, ce * c1, S(0.0), S(0.0);
    dx2 << S(0.0), S(0.0), -se * s2, se * c2;
    MatX<S> f = MatX<S>::Zero(4, 4);
    f(3, 0) = S(1.0);
    for (int a = 1; a <= 3; ++a) {
        VecX<S> u = VecX<S>::Zero(4);
        u(a) = S(1.0);
        VecX<S> e = left ? quat_mul<S>(q, u) : quat_mul<S>(u, q);
        f(0, a) = e.dot(deta);
        f(1, a) = e.dot(dx1) / (ce * ce);
        f(2, a) = e.dot(dx2) / (se * se);
    }
    return f;
}

ChartField s3xs1_structure(ChartPtr chart, bool left) {
    return endomorphism_field(std::move(chart), [left](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> f = s3xs1_frame<S>(x, left);
        MatX<S> j0 = MatX<S>::Zero(4, 4);
        j0(1, 0) = S(1.0);
        j0(0, 1) = S(-1.0);
        j0(3, 2) = S(1.0);
        j0(2, 3) = S(-1.0);
        return MatX<S>(f * j0 * inverse<SingularMetricError>(f, "frame is singular"));
    });
}

}  // namespace

GKScenario s3xs1_gk(double lambda, bool plus_left) {
    auto chart = make_chart("s3xs1", Eigen::Vector4d(0.0, -4.0, -4.0, -4.0), Eigen::Vector4d(kHalfPi, 4.0, 4.0, 4.0));
    auto g = ChartField::make(chart, Valence::bilinear(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = MatX<S>::Identity(4, 4);
        m.topLeftCorner(3, 3) = hopf_block(x(0));
        return flatten<S>(m);
    });
    auto h = ChartField::make(chart, Valence::form(3), [lambda](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> v = VecX<S>::Zero(64);
        add_form3<S>(v, 4, 0, 1, 2, lambda * sin(x(0)) * cos(x(0)));
        return v;
    });
    return GKScenario{"s3xs1_gk", GeneralizedMetric(g, h),
                      BiHermitianData{s3xs1_structure(chart, plus_left), s3xs1_structure(chart, !plus_left)}};
}

// λ = +2 pairs with the left-invariant frame on J₊; the other sign needs the swap.
GKScenario s3xs1_gk() { return s3xs1_gk(2.0, true); }

BiHermitianData kahler_structures(ChartPtr chart) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(4, 4);
    j(1, 0) = 1.0;
    j(0, 1) = -1.0;
    j(3, 2) = 1.0;
    j(2, 3) = -1.0;
    // column-major storage of the acting matrix is the covariant-first layout
    auto f = constant_field(chart, Valence::endomorphism(), Eigen::Map<Eigen::VectorXd>(j.data(), 16));
    return BiHermitianData{f, f};
}

EulerDomain euler_sphere(double radius) {
    auto chart = make_chart("s2_full", Eigen::Vector2d(0.0, -0.1), Eigen::Vector2d(M_PI, 2.0 * M_PI + 0.1));
    const double r2 = radius * radius;
    auto g = ChartField::make(chart, Valence::bilinear(), [r2](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = MatX<S>::Zero(2, 2);
        m(0, 0) = S(r2);
        m(1, 1) = r2 * sin(x(0)) * sin(x(0));
        return flatten<S>(m);
    });
    return EulerDomain{"round_sphere", GeneralizedMetric(g), Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(M_PI, 2.0 * M_PI)};
}

EulerDomain euler_torus() {
    auto chart = make_chart("t2_full", Eigen::Vector2d::Constant(-0.1), Eigen::Vector2d::Constant(2.0 * M_PI + 0.1));
    return EulerDomain{"flat_torus", GeneralizedMetric(euclidean_metric(chart)), Eigen::Vector2d::Zero(),
                       Eigen::Vector2d::Constant(2.0 * M_PI)};
}

EulerDomain euler_sphere_product() {
    auto chart = make_chart("s2xs2_full", Eigen::Vector4d(0.0, -0.1, 0.0, -0.1),
                            Eigen::Vector4d(M_PI, 2.0 * M_PI + 0.1, M_PI, 2.0 * M_PI + 0.1));
    auto g = ChartField::make(chart, Valence::bilinear(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = MatX<S>::Identity(4, 4);
        m(1, 1) = sin(x(0)) * sin(x(0));
        m(3, 3) = sin(x(2)) * sin(x(2));
        return flatten<S>(m);
    });
    return EulerDomain{"sphere_product", GeneralizedMetric(g), Eigen::Vector4d(0.0, 0.0, 0.0, 0.0),
                       Eigen::Vector4d(M_PI, 2.0 * M_PI, M_PI, 2.0 * M_PI)};
}

EulerDomain euler_s3xs1(double lambda) {
    const double p = 2.0 * M_PI;
    auto chart = make_chart("s3xs1_full", Eigen::Vector4d(0.0, -0.1, -0.1, -0.1),
                            Eigen::Vector4d(kHalfPi, p + 0.1, p + 0.1, p + 0.1));
    auto g = ChartField::make(chart, Valence::bilinear(), [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        MatX<S> m = MatX<S>::Identity(4, 4);
        m.topLeftCorner(3, 3) = hopf_block(x(0));
        return flatten<S>(m);
    });
    auto h = ChartField::make(chart, Valence::form(3), [lambda](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> v = VecX<S>::Zero(64);
        add_form3<S>(v, 4, 0, 1, 2, lambda * sin(x(0)) * cos(x(0)));
        return v;
    });
    return EulerDomain{"s3xs1", GeneralizedMetric(g, h), Eigen::Vector4d(0.0, 0.0, 0.0, 0.0),
                       Eigen::Vector4d(kHalfPi, p, p, p)};
}

}  // namespace ggred
