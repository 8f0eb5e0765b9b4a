#include "ggred/gk.hpp"

#include <algorithm>
#include <cmath>

#include "ggred/detail/reduction.hpp"

namespace ggred {

using namespace detail;

namespace {

/// (i*n + j, l) = ∂_l J^i_j
Eigen::MatrixXd endomorphism_jacobian(const ChartField& j, const Eigen::VectorXd& point) {
    auto fn = [&j](const auto& y) {
        using S = typename std::decay_t<decltype(y)>::Scalar;
        return flatten<S>(endomorphism_at(j, y));
    };
    return jacobian(fn, VecX<double>(point));
}

double h_eval(const Eigen::VectorXd& h, int n, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
              const Eigen::VectorXd& c) {
    return contract_two<double>(h, a, b, n).dot(c);
}

}  // namespace

double BiHermitianValidation::worst() const {
    return std::max({square, compatibility, nijenhuis, parallel_plus, parallel_minus, h_type});
}

Tensor3<double> nijenhuis(const ChartField& j, const Eigen::VectorXd& point) {
    const int n = j.dim();
    Eigen::MatrixXd jm = endomorphism_at<double>(j, point);
    Eigen::MatrixXd dj = endomorphism_jacobian(j, point);
    auto d = [&](int i, int a, int l) { return dj(i * n + a, l); };
    Tensor3<double> out(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l) acc += jm(l, a) * d(i, b, l) - jm(l, b) * d(i, a, l);
                for (int m = 0; m < n; ++m) acc += jm(i, m) * (d(m, a, b) - d(m, b, a));
                out(i, a, b) = acc;
            }
    return out;
}

Tensor3<double> bismut_derivative_endomorphism(const ChartField& j, int sign, const GeneralizedMetric& ctx,
                                               const Eigen::VectorXd& point) {
    const int n = j.dim();
    Eigen::MatrixXd jm = endomorphism_at<double>(j, point);
    Eigen::MatrixXd dj = endomorphism_jacobian(j, point);
    Tensor3<double> gam = bismut_christoffel_at<double>(ctx, sign, point);
    Tensor3<double> out(n, n, n);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a)
            for (int k = 0; k < n; ++k) {
                double acc = dj(i * n + a, k);
                for (int l = 0; l < n; ++l) acc += gam(i, k, l) * jm(l, a) - gam(l, k, a) * jm(i, l);
                out(i, a, k) = acc;
            }
    return out;
}

BiHermitianValidation validate_bihermitian(const BiHermitianData& bh, const GeneralizedMetric& ctx,
                                           const std::vector<Eigen::VectorXd>& points,
                                           std::mt19937_64& rng, int triples_per_point) {
    const int n = ctx.dim();
    BiHermitianValidation v;
    std::normal_distribution<double> nd;
    auto tmax = [](const Tensor3<double>& t) {
        double m = 0.0;
        for (Eigen::Index i = 0; i < t.size(); ++i) m = std::max(m, std::abs(t.data()[i]));
        return m;
    };
    for (const auto& p : points) {
        ctx.chart().require_inside(p);
        Eigen::MatrixXd g = metric_at<double>(ctx.g(), p);
        Eigen::VectorXd h = ctx.h()(p);
        for (int sign : {1, -1}) {
            const ChartField& jf = sign > 0 ? bh.jplus : bh.jminus;
            Eigen::MatrixXd jm = endomorphism_at<double>(jf, p);
            Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
            v.square = std::max(v.square, (jm * jm + id).cwiseAbs().maxCoeff());
            v.compatibility = std::max(v.compatibility, (jm.transpose() * g * jm - g).cwiseAbs().maxCoeff());
            v.nijenhuis = std::max(v.nijenhuis, tmax(nijenhuis(jf, p)));
            double par = tmax(bismut_derivative_endomorphism(jf, sign, ctx, p));
            if (sign > 0) v.parallel_plus = std::max(v.parallel_plus, par);
            else v.parallel_minus = std::max(v.parallel_minus, par);
            for (int t = 0; t < triples_per_point; ++t) {
                Eigen::VectorXd a(n), b(n), c(n);
                for (int i = 0; i < n; ++i) { a(i) = nd(rng); b(i) = nd(rng); c(i) = nd(rng); }
                a.normalize();
                b.normalize();
                c.normalize();
                Eigen::VectorXd ja = jm * a, jb = jm * b, jc = jm * c;
                double r = h_eval(h, n, ja, jb, c) + h_eval(h, n, ja, b, jc) + h_eval(h, n, a, jb, jc) -
                           h_eval(h, n, a, b, c);
                v.h_type = std::max(v.h_type, std::abs(r));
            }
        }
    }
    return v;
}

double invariance_defect(const Eigen::MatrixXd& j, const Eigen::MatrixXd& basis, const Eigen::MatrixXd& g) {
    Eigen::MatrixXd p = basis * basis.transpose() * g;
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(p.rows(), p.cols());
    return ((id - p) * j * p).norm();
}

std::pair<double, double> check_tau_invariance(const BiHermitianData& bh, const ExtendedAction& ea,
                                               const GeneralizedMetric& ctx, const Eigen::VectorXd& point,
                                               const SectionData* section) {
    auto [tp, tm] = horizontal_frames(ea, ctx, point, section);
    Eigen::MatrixXd g = metric_at<double>(ctx.g(), point);
    return {invariance_defect(endomorphism_at<double>(bh.jplus, point), tp, g),
            invariance_defect(endomorphism_at<double>(bh.jminus, point), tm, g)};
}

ChartField reduced_endomorphism(const QuotientScenario& scn, const ChartField& j, int sign) {
    return endomorphism_field<1>(scn.quotient, [scn, j, sign](const auto& q) {
        using S = typename std::decay_t<decltype(q)>::Scalar;
        auto [x, f] = lifted_frame_at(scn, sign, q);
        MatX<S> g = metric_at(scn.ctx.g(), x);
        MatX<S> low = f.transpose() * g;
        MatX<S> jf = endomorphism_at(j, x) * f;
        return lu_solve<LiftError>(MatX<S>(low * f), MatX<S>(low * jf), "lifted frame is degenerate");
    });
}

ReducedGK reduce_gk(const QuotientScenario& scn, const BiHermitianData& bh,
                    const std::vector<Eigen::VectorXd>& quotient_points, std::mt19937_64& rng,
                    double tolerance) {
    const SectionData* sec = scn.section ? &*scn.section : nullptr;
    for (const auto& q : quotient_points) {
        Eigen::VectorXd x = scn.lift(q);
        auto [dp, dm] = check_tau_invariance(bh, scn.action, scn.ctx, x, sec);
        if (dp > tolerance || dm > tolerance)
            throw ReductionConditionError("J± does not preserve τ± (defects " + std::to_string(dp) + ", " +
                                          std::to_string(dm) + ")");
    }
    ReducedGK out{BiHermitianData{reduced_endomorphism(scn, bh.jplus, 1), reduced_endomorphism(scn, bh.jminus, -1)},
                  reduced_context(scn), {}, 0.0};
    out.validation = validate_bihermitian(out.reduced, out.context, quotient_points, rng);
    for (const auto& q : quotient_points) {
        Eigen::VectorXd x = scn.lift(q);
        Eigen::MatrixXd f = lifted_frame(scn, 1, q);
        Eigen::MatrixXd om = omega_curvature(scn.action, scn.ctx, 1, x, f).lemma[0];
        for (int a = 1; a < scn.action.size(); ++a) om += omega_curvature(scn.action, scn.ctx, 1, x, f).lemma[a];
        Eigen::MatrixXd jt = endomorphism_at<double>(out.reduced.jplus, q);
        out.omega_type = std::max(out.omega_type, (jt.transpose() * om * jt - om).cwiseAbs().maxCoeff());
    }
    return out;
}

}  // namespace ggred
