#include "ggred/calculus.hpp"

#include <algorithm>
#include <cmath>

namespace ggred {

Chart::Chart(std::string name, Eigen::VectorXd lower, Eigen::VectorXd upper)
    : name_(std::move(name)), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() < 1 || lower_.size() != upper_.size())
        throw DomainError("chart '" + name_ + "': bad bounds");
    for (Eigen::Index i = 0; i < lower_.size(); ++i)
        if (!(lower_(i) < upper_(i))) throw DomainError("chart '" + name_ + "': empty axis");
}

bool Chart::contains(const Eigen::VectorXd& x) const {
    if (x.size() != lower_.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x(i) > lower_(i) && x(i) < upper_(i))) return false;
    return true;
}

bool Chart::contains_interior(const Eigen::VectorXd& x, double margin) const {
    if (x.size() != lower_.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double pad = margin * (upper_(i) - lower_(i));
        if (!(x(i) > lower_(i) + pad && x(i) < upper_(i) - pad)) return false;
    }
    return true;
}

void Chart::require_inside(const Eigen::VectorXd& x) const {
    if (!contains(x)) throw DomainError("point outside chart '" + name_ + "'");
}

std::vector<Eigen::VectorXd> Chart::sample(std::size_t count, std::mt19937_64& rng,
                                           double margin) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        Eigen::VectorXd x(dim());
        for (int i = 0; i < dim(); ++i) {
            double len = upper_(i) - lower_(i);
            double lo = lower_(i) + margin * len;
            x(i) = lo + unit(rng) * (1.0 - 2.0 * margin) * len;
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

int ChartField::size() const { return ipow(dim(), valence_.rank()); }

namespace {

void require_finite(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(v(i))) throw EvaluationError("non-finite field value");
}

}  // namespace

PointJet differentiate(const ChartField& f, const Eigen::VectorXd& point, int order) {
    if (order != 1 && order != 2) throw Error("differentiate: order must be 1 or 2");
    f.chart().require_inside(point);
    PointJet jet;
    jet.point = point;
    jet.value = f(point);
    require_finite(jet.value);
    jet.first = jacobian(f, VecX<double>(point));
    require_finite(Eigen::Map<const Eigen::VectorXd>(jet.first.data(), jet.first.size()));
    if (order == 2) {
        auto h = hessian(f, VecX<double>(point));
        jet.second.assign(h.begin(), h.end());
        for (const auto& m : jet.second)
            require_finite(Eigen::Map<const Eigen::VectorXd>(m.data(), m.size()));
    }
    return jet;
}

Tensor3<double> christoffel(const ChartField& g, const Eigen::VectorXd& point) {
    g.chart().require_inside(point);
    return christoffel_at<double>(g, point);
}

Tensor4<double> riemann(const ChartField& g, const Eigen::VectorXd& point) {
    g.chart().require_inside(point);
    return riemann_at<double>(g, point);
}

int permutation_sign(const std::vector<int>& perm) {
    int sign = 1;
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) sign = -sign;
    return sign;
}

ChartField exterior_derivative(const ChartField& w) {
    if (w.max_depth() < 1) throw EvaluationError("exterior derivative needs a differentiable form");
    Valence out{w.valence().covariant + 1, 0, true};
    auto fn = [w](const auto& x) { return exterior_derivative_at(w, x); };
    switch (w.max_depth()) {
        case 1: return ChartField::make<0>(w.chart_ptr(), out, fn);
        case 2: return ChartField::make<1>(w.chart_ptr(), out, fn);
        default: return ChartField::make<2>(w.chart_ptr(), out, fn);
    }
}

Eigen::VectorXd lie_bracket(const ChartField& x_field, const ChartField& y_field,
                            const Eigen::VectorXd& point) {
    x_field.chart().require_inside(point);
    return lie_bracket_at<double>(x_field, y_field, point);
}

double christoffel_asymmetry(const Tensor3<double>& gamma) {
    const auto n = gamma.dimension(0);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                worst = std::max(worst, std::abs(gamma(i, j, k) - gamma(i, k, j)));
    return worst;
}

CurvatureSymmetry curvature_symmetry(const Tensor4<double>& r) {
    const auto n = r.dimension(0);
    CurvatureSymmetry s;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l) {
                    s.antisym_first = std::max(s.antisym_first, std::abs(r(i, j, k, l) + r(j, i, k, l)));
                    s.antisym_second = std::max(s.antisym_second, std::abs(r(i, j, k, l) + r(i, j, l, k)));
                    s.pair = std::max(s.pair, std::abs(r(i, j, k, l) - r(k, l, i, j)));
                    s.bianchi = std::max(s.bianchi,
                                         std::abs(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)));
                }
    return s;
}

double metric_compatibility_residual(const ChartField& g, const Eigen::VectorXd& point) {
    g.chart().require_inside(point);
    const int n = g.dim();
    Eigen::MatrixXd gm = metric_at<double>(g, point);
    Eigen::MatrixXd dg = jacobian(g, VecX<double>(point));
    Tensor3<double> gamma = christoffel_at<double>(g, point);
    double worst = 0.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double v = dg(i * n + j, k);
                for (int m = 0; m < n; ++m)
                    v -= gamma(m, k, i) * gm(m, j) + gamma(m, k, j) * gm(i, m);
                worst = std::max(worst, std::abs(v));
            }
    return worst;
}

}  // namespace ggred
