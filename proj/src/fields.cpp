#include "ggred/fields.hpp"

#include "ggred/calculus.hpp"

namespace ggred {

ChartField constant_field(ChartPtr chart, Valence valence, Eigen::VectorXd values) {
    return ChartField::make(std::move(chart), valence, [values](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        return cast_vec<S>(values);
    });
}

ChartField euclidean_metric(ChartPtr chart) {
    const int n = chart->dim();
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    return constant_field(std::move(chart), Valence::bilinear(), flatten<double>(id));
}

ChartField coordinate_vector(ChartPtr chart, int i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(chart->dim(), i);
    return constant_field(std::move(chart), Valence::vector(), e);
}

PolynomialField::PolynomialField(ChartPtr chart, Valence valence, std::mt19937_64& rng,
                                 double scale) {
    const int n = chart->dim();
    const int comps = ipow(n, valence.rank());
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd centre = 0.5 * (chart->lower() + chart->upper());
    Eigen::VectorXd c0(comps);
    Eigen::MatrixXd c1(comps, n);
    std::vector<Eigen::MatrixXd> c2(comps, Eigen::MatrixXd(n, n));
    for (int c = 0; c < comps; ++c) {
        c0(c) = scale * u(rng);
        for (int i = 0; i < n; ++i) c1(c, i) = scale * u(rng);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) c2[c](i, j) = 0.5 * scale * u(rng);
    }
    field_ = ChartField::make(std::move(chart), valence, [=](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        VecX<S> y(n);
        for (int i = 0; i < n; ++i) y(i) = x(i) - centre(i);
        VecX<S> out(comps);
        for (int c = 0; c < comps; ++c) {
            S acc(c0(c));
            for (int i = 0; i < n; ++i) {
                acc += c1(c, i) * y(i);
                for (int j = 0; j < n; ++j) acc += c2[c](i, j) * y(i) * y(j);
            }
            out(c) = acc;
        }
        return out;
    });
}

ChartField random_vector_field(ChartPtr chart, std::mt19937_64& rng, double scale) {
    return PolynomialField(std::move(chart), Valence::vector(), rng, scale).field();
}

ChartField random_covector_field(ChartPtr chart, std::mt19937_64& rng, double scale) {
    return PolynomialField(std::move(chart), Valence::covector(), rng, scale).field();
}

ChartField lower_index(const ChartField& g, const ChartField& x, double sign) {
    auto fn = [g, x, sign](const auto& p) {
        using S = typename std::decay_t<decltype(p)>::Scalar;
        VecX<S> out = metric_at(g, p) * x(p);
        return VecX<S>(out * S(sign));
    };
    int depth = std::min(g.max_depth(), x.max_depth());
    switch (depth) {
        case 0: return ChartField::make<0>(g.chart_ptr(), Valence::covector(), fn);
        case 1: return ChartField::make<1>(g.chart_ptr(), Valence::covector(), fn);
        case 2: return ChartField::make<2>(g.chart_ptr(), Valence::covector(), fn);
        default: return ChartField::make<3>(g.chart_ptr(), Valence::covector(), fn);
    }
}

}  // namespace ggred
