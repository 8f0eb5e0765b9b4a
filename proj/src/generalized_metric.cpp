#include "ggred/generalized_metric.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ggred/fields.hpp"

namespace ggred {

ChartField zero_form(ChartPtr chart, int degree) {
    const int n = chart->dim();
    return constant_field(std::move(chart), Valence::form(degree),
                          Eigen::VectorXd::Zero(ipow(n, degree)));
}

GeneralizedMetric::GeneralizedMetric(ChartField g, ChartField h) : g_(std::move(g)), h_(std::move(h)) {
    if (g_.valence().covariant != 2 || g_.valence().contravariant != 0)
        throw Error("generalized metric: g must be a bilinear form");
    if (h_.valence().covariant != 3 || h_.valence().contravariant != 0)
        throw DegreeError("generalized metric: H must be a 3-form");
    if (h_.chart_ptr() != g_.chart_ptr() && h_.dim() != g_.dim())
        throw Error("generalized metric: g and H live on different charts");
}

GeneralizedMetric::GeneralizedMetric(ChartField g)
    : GeneralizedMetric(g, zero_form(g.chart_ptr(), 3)) {}

GeneralizedMetric::Validation GeneralizedMetric::validate(
    const std::vector<Eigen::VectorXd>& points) const {
    Validation v;
    v.min_eigenvalue = std::numeric_limits<double>::infinity();
    const int n = dim();
    for (const auto& p : points) {
        Eigen::MatrixXd gm = metric_at<double>(g_, p);
        v.symmetry = std::max(v.symmetry, (gm - gm.transpose()).cwiseAbs().maxCoeff());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gm + gm.transpose()));
        v.min_eigenvalue = std::min(v.min_eigenvalue, es.eigenvalues().minCoeff());
        Eigen::VectorXd h = h_(p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double a = h((i * n + j) * n + k);
                    v.h_antisymmetry = std::max({v.h_antisymmetry,
                                                 std::abs(a + h((j * n + i) * n + k)),
                                                 std::abs(a + h((i * n + k) * n + j))});
                }
        if (n >= 4) {
            Eigen::VectorXd dh = exterior_derivative_at<double>(h_, p);
            v.dh = std::max(v.dh, dh.cwiseAbs().maxCoeff());
        }
    }
    return v;
}

GeneralizedVector courant_bracket(const GeneralizedField& a, const GeneralizedField& b,
                                  const GeneralizedMetric& ctx, const Eigen::VectorXd& point) {
    ctx.chart().require_inside(point);
    auto [v, f] = courant_bracket_at<double>(a, b, ctx.h(), point);
    return {v, f};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> split_pm(const GeneralizedVector& a,
                                                     const Eigen::MatrixXd& g) {
    Eigen::VectorXd up = lu_solve<SingularMetricError>(Eigen::MatrixXd(g), Eigen::MatrixXd(a.xi),
                                                        "metric is singular");
    return {0.5 * (a.x + up), 0.5 * (a.x - up)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> split_pm(const GeneralizedVector& a,
                                                     const GeneralizedMetric& ctx,
                                                     const Eigen::VectorXd& point) {
    return split_pm(a, metric_at<double>(ctx.g(), point));
}

Eigen::VectorXd bismut_derivative(const ChartField& xf, const ChartField& yf, int sign,
                                  const GeneralizedMetric& ctx, const Eigen::VectorXd& point) {
    ctx.chart().require_inside(point);
    return bismut_derivative_at<double>(ctx, sign, xf, yf, point);
}

Eigen::VectorXd bismut_via_courant(const ChartField& xf, const ChartField& yf, int sign,
                                   const GeneralizedMetric& ctx, const Eigen::VectorXd& point) {
    ctx.chart().require_inside(point);
    GeneralizedField a{xf, lower_index(ctx.g(), xf, -sign)};
    GeneralizedField b{yf, lower_index(ctx.g(), yf, sign)};
    auto [v, f] = courant_bracket_at<double>(a, b, ctx.h(), point);
    auto [plus, minus] = split_pm(GeneralizedVector{v, f}, ctx, point);
    return sign > 0 ? plus : minus;
}

Eigen::VectorXd bismut_torsion(const ChartField& xf, const ChartField& yf, int sign,
                               const GeneralizedMetric& ctx, const Eigen::VectorXd& point) {
    return bismut_derivative(xf, yf, sign, ctx, point) - bismut_derivative(yf, xf, sign, ctx, point) -
           lie_bracket(xf, yf, point);
}

Tensor4<double> bismut_curvature(int sign, const GeneralizedMetric& ctx, const Eigen::VectorXd& point) {
    ctx.chart().require_inside(point);
    return bismut_curvature_at<double>(ctx, sign, point);
}

Tensor4<double> bismut_curvature_commutator(int sign, const GeneralizedMetric& ctx,
                                            const Eigen::VectorXd& point) {
    ctx.chart().require_inside(point);
    const int n = ctx.dim();
    Eigen::MatrixXd gm = metric_at<double>(ctx.g(), point);
    Tensor3<double> gam = bismut_christoffel_at<double>(ctx, sign, point);
    auto flat = [&ctx, sign](const auto& y) { return flatten(bismut_christoffel_at(ctx, sign, y)); };
    Eigen::MatrixXd dgam = jacobian(flat, VecX<double>(point));
    auto d = [&](int m, int j, int k, int i) { return dgam((m * n + j) * n + k, i); };
    Tensor4<double> r(n, n, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Eigen::VectorXd up(n);
                for (int p = 0; p < n; ++p) {
                    double acc = d(p, j, k, i) - d(p, i, k, j);
                    for (int m = 0; m < n; ++m)
                        acc += gam(p, i, m) * gam(m, j, k) - gam(p, j, m) * gam(m, i, k);
                    up(p) = acc;
                }
                Eigen::VectorXd low = gm * up;
                for (int l = 0; l < n; ++l) r(i, j, k, l) = low(l);
            }
    return r;
}

double pair_symmetry_residual(const Tensor4<double>& rm, const Tensor4<double>& rp) {
    const auto n = rm.dimension(0);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l)
                    worst = std::max(worst, std::abs(rm(i, j, k, l) - rp(k, l, i, j)));
    return worst;
}

double max_abs(const Tensor4<double>& t) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(t.data()[i]));
    return worst;
}

double max_abs_diff(const Tensor4<double>& a, const Tensor4<double>& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

}  // namespace ggred
