#include "ggred/quotient.hpp"

#include "ggred/detail/reduction.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace ggred {

using namespace detail;

namespace {

Eigen::MatrixXd orthonormal_horizontal(const ActionData<double>& data, int sign, int expected) {
    const int n = static_cast<int>(data.g.rows());
    Eigen::MatrixXd basis(n, 0);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd w = data.horizontal(sign, Eigen::VectorXd::Unit(n, i));
        double scale = std::sqrt(std::max(w.dot(data.g * w), 0.0));
        for (Eigen::Index c = 0; c < basis.cols(); ++c) w -= basis.col(c).dot(data.g * w) * basis.col(c);
        double nrm = std::sqrt(std::max(w.dot(data.g * w), 0.0));
        if (nrm <= 1e-8 * std::max(scale, 1.0)) continue;
        basis.conservativeResize(n, basis.cols() + 1);
        basis.col(basis.cols() - 1) = w / nrm;
    }
    if (basis.cols() != expected) throw RankError("horizontal distribution has the wrong rank");
    return basis;
}

}  // namespace

double ActionValidation::worst_identity() const {
    return std::max({isotropy, equivariance, killing, h_invariance});
}

std::vector<std::string> ActionValidation::failed(double tolerance) const {
    std::vector<std::string> out;
    if (isotropy > tolerance) out.push_back("isotropy");
    if (equivariance > tolerance) out.push_back("equivariance");
    if (killing > tolerance || h_invariance > tolerance) out.push_back("invariance");
    return out;
}

ActionValidation validate_extended_action(const ExtendedAction& ea, const GeneralizedMetric& ctx,
                                          const std::vector<Eigen::VectorXd>& points) {
    const int n = ctx.dim(), s = ea.size();
    if (static_cast<int>(ea.xi.size()) != s) throw Error("extended action: V and ξ counts differ");
    ActionValidation out;
    out.min_singular = std::numeric_limits<double>::infinity();
    for (const auto& x : points) {
        ctx.chart().require_inside(x);
        Eigen::MatrixXd g = metric_at<double>(ctx.g(), x);
        Eigen::MatrixXd dg = jacobian(ctx.g(), VecX<double>(x));
        Eigen::VectorXd h = ctx.h()(x);
        Eigen::MatrixXd dh = jacobian(ctx.h(), VecX<double>(x));
        Eigen::MatrixXd vm(n, s);
        for (int a = 0; a < s; ++a) vm.col(a) = ea.v[a](x);
        Eigen::MatrixXd gram = vm.transpose() * g * vm;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        out.min_singular = std::min(out.min_singular, std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0)));
        for (int a = 0; a < s; ++a) {
            Eigen::VectorXd va = vm.col(a), xa = ea.xi[a](x);
            for (int b = 0; b < s; ++b)
                out.isotropy = std::max(out.isotropy, std::abs(xa.dot(vm.col(b)) + ea.xi[b](x).dot(va)));
            Eigen::MatrixXd dxi = jacobian(ea.xi[a], VecX<double>(x));  // (k, j) = ∂_j ξ_k
            Eigen::MatrixXd dv = jacobian(ea.v[a], VecX<double>(x));    // (k, j) = ∂_j V^k
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double ivh = 0.0;
                    for (int i = 0; i < n; ++i) ivh += va(i) * h((i * n + j) * n + k);
                    out.equivariance = std::max(out.equivariance, std::abs(dxi(k, j) - dxi(j, k) - ivh));
                    double lg = 0.0;
                    for (int p = 0; p < n; ++p)
                        lg += va(p) * dg(j * n + k, p) + g(p, k) * dv(p, j) + g(j, p) * dv(p, k);
                    out.killing = std::max(out.killing, std::abs(lg));
                }
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        double lh = 0.0;
                        for (int p = 0; p < n; ++p)
                            lh += va(p) * dh((i * n + j) * n + k, p) + h((p * n + j) * n + k) * dv(p, i) +
                                  h((i * n + p) * n + k) * dv(p, j) + h((i * n + j) * n + p) * dv(p, k);
                        out.h_invariance = std::max(out.h_invariance, std::abs(lh));
                    }
        }
    }
    return out;
}

ReductionMatrices reduction_matrices(const ExtendedAction& ea, const GeneralizedMetric& ctx,
                                     const Eigen::VectorXd& point) {
    ctx.chart().require_inside(point);
    auto d = action_data<double>(ctx, ea, point, nullptr);
    ReductionMatrices m;
    m.g_mat = d.gram;
    m.k = d.k;
    m.k_inv = d.kinv;
    m.t = d.t;
    m.t_inv = inverse<RankError>(d.t, "T is singular");
    Eigen::MatrixXd vm = d.v - d.ginv * d.xi.transpose();
    m.t_minus = vm.transpose() * d.g * vm;
    return m;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> horizontal_frames(const ExtendedAction& ea,
                                                              const GeneralizedMetric& ctx,
                                                              const Eigen::VectorXd& point,
                                                              const SectionData* section) {
    ctx.chart().require_inside(point);
    auto d = action_data<double>(ctx, ea, point, section);
    const int expected = ctx.dim() - ea.size() - (section ? section->size() : 0);
    return {orthonormal_horizontal(d, 1, expected), orthonormal_horizontal(d, -1, expected)};
}

Eigen::MatrixXd constraint_rows(const ExtendedAction& ea, const GeneralizedMetric& ctx, int sign,
                                const Eigen::VectorXd& point) {
    return action_data<double>(ctx, ea, point, nullptr).rows(sign);
}

double OmegaValues::residual() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < lemma.size(); ++a)
        worst = std::max(worst, (lemma[a] - direct[a]).cwiseAbs().maxCoeff());
    return worst;
}

OmegaValues omega_curvature(const ExtendedAction& ea, const GeneralizedMetric& ctx, int sign,
                            const Eigen::VectorXd& point, const Eigen::MatrixXd& frame) {
    ctx.chart().require_inside(point);
    const int s = ea.size(), n = ctx.dim();
    auto d = action_data<double>(ctx, ea, point, nullptr);
    auto dxi = d_constraint(ctx, ea, sign, VecX<double>(point));
    auto theta = [&ctx, &ea, sign](const auto& y) {
        using S = typename std::decay_t<decltype(y)>::Scalar;
        auto dy = action_data(ctx, ea, y, nullptr);
        MatX<S> th = sign > 0 ? MatX<S>(dy.kinv.transpose() * dy.rows(1)) : MatX<S>(dy.kinv * dy.rows(-1));
        return flatten_rows<S>(th);
    };
    auto dtheta = d_rows(theta, VecX<double>(point), s, n);
    OmegaValues out;
    for (int a = 0; a < s; ++a) {
        Eigen::MatrixXd lem = Eigen::MatrixXd::Zero(n, n);
        for (int b = 0; b < s; ++b) lem += (sign > 0 ? d.kinv(b, a) : d.kinv(a, b)) * dxi[b];
        out.lemma.push_back(frame.transpose() * lem * frame);
        out.direct.push_back(frame.transpose() * dtheta[a] * frame);
    }
    return out;
}

std::pair<double, double> connection_along_orbit_residual(const ExtendedAction& ea,
                                                          const GeneralizedMetric& ctx,
                                                          const Eigen::VectorXd& point,
                                                          const Eigen::MatrixXd& frame) {
    ctx.chart().require_inside(point);
    const int n = ctx.dim();
    Eigen::MatrixXd g = metric_at<double>(ctx.g(), point);
    Tensor3<double> gam = christoffel_at<double>(ctx.g(), point);
    Eigen::VectorXd h = ctx.h()(point);
    auto dxm = d_constraint(ctx, ea, -1, VecX<double>(point));
    double worst = 0.0, scale = 0.0;
    for (int a = 0; a < ea.size(); ++a) {
        Eigen::VectorXd va = ea.v[a](point);
        Eigen::MatrixXd dv = jacobian(ea.v[a], VecX<double>(point));
        for (Eigen::Index z = 0; z < frame.cols(); ++z) {
            Eigen::VectorXd zv = frame.col(z);
            // ∇_Z V_a
            Eigen::VectorXd nabla = dv * zv;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) nabla(i) += gam(i, j, k) * zv(j) * va(k);
            Eigen::VectorXd hvz = contract_two<double>(h, va, zv, n);
            for (Eigen::Index w = 0; w < frame.cols(); ++w) {
                Eigen::VectorXd wv = frame.col(w);
                double lhs = nabla.dot(g * wv) - 0.5 * hvz.dot(wv);
                double rhs = 0.5 * zv.dot(dxm[a] * wv);
                worst = std::max(worst, std::abs(lhs - rhs));
                scale = std::max(scale, std::abs(rhs));
            }
        }
    }
    return {worst, scale};
}

QuotientValidation validate_quotient(const QuotientScenario& scn,
                                     const std::vector<Eigen::VectorXd>& quotient_points) {
    QuotientValidation out;
    const int r = scn.section ? scn.section->size() : 0;
    out.dim_mismatch = scn.ctx.dim() - scn.action.size() - r - scn.quotient_dim();
    for (const auto& q : quotient_points) {
        Eigen::VectorXd x = scn.lift(q);
        scn.ctx.chart().require_inside(x);
        out.section_roundtrip = std::max(out.section_roundtrip, (scn.project(x) - q).cwiseAbs().maxCoeff());
        Eigen::MatrixXd dp = jacobian(scn.project, VecX<double>(x));
        for (const auto& v : scn.action.v)
            out.vertical_kernel = std::max(out.vertical_kernel, (dp * v(x)).cwiseAbs().maxCoeff());
        if (scn.section)
            for (const auto& s : scn.section->sigma) out.on_locus = std::max(out.on_locus, std::abs(s(x)(0)));
    }
    return out;
}

Eigen::MatrixXd lifted_frame(const QuotientScenario& scn, int sign, const Eigen::VectorXd& q) {
    scn.quotient->require_inside(q);
    return lifted_frame_at<double>(scn, sign, q).second;
}

ChartField reduced_metric(const QuotientScenario& scn, int sign) {
    return ChartField::make<2>(scn.quotient, Valence::bilinear(),
                               [scn, sign](const auto& q) { return reduced_metric_at(scn, sign, q); });
}

ChartField reduced_flux(const QuotientScenario& scn) {
    return ChartField::make<1>(scn.quotient, Valence::form(3),
                               [scn](const auto& q) { return reduced_flux_at(scn, q); });
}

GeneralizedMetric reduced_context(const QuotientScenario& scn) {
    return GeneralizedMetric(reduced_metric(scn, 1), reduced_flux(scn));
}

double reduced_bismut(const QuotientScenario& scn, const ChartField& xf, const ChartField& yf,
                      const ChartField& zf, const Eigen::VectorXd& q) {
    scn.quotient->require_inside(q);
    const auto& ctx = scn.ctx;
    const int n = ctx.dim();
    const SectionData* sec = scn.section ? &*scn.section : nullptr;
    auto y_minus = [&scn, &yf, sec](const auto& qq) {
        using S = typename std::decay_t<decltype(qq)>::Scalar;
        VecX<S> x = scn.lift(qq);
        VecX<S> w = jacobian(scn.lift, qq) * yf(qq);
        return action_data(scn.ctx, scn.action, x, sec).horizontal(-1, w);
    };
    Eigen::VectorXd x = scn.lift(q);
    auto data = action_data<double>(ctx, scn.action, x, sec);
    Eigen::MatrixXd dl = jacobian(scn.lift, VecX<double>(q));
    Eigen::VectorXd xq = xf(q);
    Eigen::VectorXd w = dl * xq;
    Eigen::VectorXd xp = data.horizontal(1, w);
    Eigen::VectorXd ym = y_minus(VecX<double>(q));
    Eigen::VectorXd zm = data.horizontal(-1, Eigen::VectorXd(dl * zf(q)));
    // X⁺ = dlift[X] − c^a V_a
    Eigen::VectorXd c = (data.gram).ldlt().solve(data.v.transpose() * data.g * (w - xp));
    Eigen::VectorXd dy = directional(y_minus, VecX<double>(q), VecX<double>(xq));
    for (int a = 0; a < scn.action.size(); ++a)
        dy -= c(a) * (jacobian(scn.action.v[a], VecX<double>(x)) * ym);
    Tensor3<double> gam = bismut_christoffel_at<double>(ctx, -1, x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) dy(i) += gam(i, j, k) * xp(j) * ym(k);
    return dy.dot(data.g * zm);
}

double reduced_bismut_direct(const GeneralizedMetric& reduced, const ChartField& xf,
                             const ChartField& yf, const ChartField& zf, const Eigen::VectorXd& q) {
    Eigen::VectorXd d = bismut_derivative(xf, yf, -1, reduced, q);
    return d.dot(metric_at<double>(reduced.g(), q) * zf(q));
}

Tensor4<double> contract_frames(const Tensor4<double>& r, const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b) {
    const int n = static_cast<int>(r.dimension(0));
    const int k = static_cast<int>(a.cols());
    // Contract one slot at a time to keep the cost at n^4·k.
    Tensor4<double> t1(k, n, n, n), t2(k, k, n, n), t3(k, k, k, n), out(k, k, k, k);
    t1.setZero();
    t2.setZero();
    t3.setZero();
    out.setZero();
    for (int i = 0; i < k; ++i)
        for (int p = 0; p < n; ++p)
            for (int b2 = 0; b2 < n; ++b2)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) t1(i, b2, c, d) += a(p, i) * r(p, b2, c, d);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int p = 0; p < n; ++p)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) t2(i, j, c, d) += a(p, j) * t1(i, p, c, d);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                for (int p = 0; p < n; ++p)
                    for (int d = 0; d < n; ++d) t3(i, j, l, d) += b(p, l) * t2(i, j, p, d);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                for (int m = 0; m < k; ++m)
                    for (int p = 0; p < n; ++p) out(i, j, l, m) += b(p, m) * t3(i, j, l, p);
    return out;
}

Tensor4<double> contract_frame(const Tensor4<double>& r, const Eigen::MatrixXd& e) {
    return contract_frames(r, e, e);
}

Tensor4<double> reduced_curvature_quotient(const QuotientScenario& scn, const Eigen::VectorXd& q,
                                           const Eigen::MatrixXd& e) {
    scn.quotient->require_inside(q);
    const auto& ctx = scn.ctx;
    const int n = ctx.dim(), s = scn.action.size(), k = static_cast<int>(e.cols());
    auto [x, fp] = lifted_frame_at<double>(scn, 1, q);
    Eigen::MatrixXd fm = lifted_frame_at<double>(scn, -1, VecX<double>(q)).second;
    Eigen::MatrixXd xp = fp * e, zm = fm * e;
    auto data = action_data<double>(ctx, scn.action, x, nullptr);
    Eigen::MatrixXd tinv = inverse<RankError>(data.t, "T is singular");
    Tensor4<double> out = contract_frames(bismut_curvature(-1, ctx, x), xp, zm);
    auto dxp = d_constraint(ctx, scn.action, 1, VecX<double>(x));
    auto dxm = d_constraint(ctx, scn.action, -1, VecX<double>(x));
    std::vector<Eigen::MatrixXd> ap(s), am(s);
    for (int a = 0; a < s; ++a) {
        ap[a] = xp.transpose() * dxp[a] * xp;
        am[a] = zm.transpose() * dxm[a] * zm;
    }
    // N[a](j, l) = g(Z⁻_l, ∇⁻_{X⁺_j} V⁻_a)
    Tensor3<double> gam = bismut_christoffel_at<double>(ctx, -1, x);
    std::vector<Eigen::MatrixXd> nab(s, Eigen::MatrixXd(k, k));
    for (int a = 0; a < s; ++a) {
        auto vminus = [&ctx, &scn, a](const auto& y) {
            using S = typename std::decay_t<decltype(y)>::Scalar;
            MatX<S> g = metric_at(ctx.g(), y);
            MatX<S> xi = scn.action.xi[a](y);
            VecX<S> out = scn.action.v[a](y) - lu_solve<SingularMetricError>(g, xi, "metric is singular");
            return out;
        };
        Eigen::VectorXd vm = vminus(VecX<double>(x));
        Eigen::MatrixXd dvm = jacobian(vminus, VecX<double>(x));
        for (int j = 0; j < k; ++j) {
            Eigen::VectorXd yj = xp.col(j);
            Eigen::VectorXd nv = dvm * yj;
            for (int i = 0; i < n; ++i)
                for (int p = 0; p < n; ++p)
                    for (int r = 0; r < n; ++r) nv(i) += gam(i, p, r) * yj(p) * vm(r);
            Eigen::VectorXd low = data.g * nv;
            for (int l = 0; l < k; ++l) nab[a](j, l) = zm.col(l).dot(low);
        }
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                for (int m = 0; m < k; ++m) {
                    double acc = 0.0;
                    for (int a = 0; a < s; ++a)
                        for (int b = 0; b < s; ++b) {
                            acc -= 0.5 * data.kinv(a, b) * ap[a](i, j) * am[b](l, m);
                            acc += tinv(a, b) * (nab[a](j, l) * nab[b](i, m) - nab[a](i, l) * nab[b](j, m));
                        }
                    out(i, j, l, m) += acc;
                }
    return out;
}

Tensor4<double> reduced_curvature_direct(const GeneralizedMetric& reduced, const Eigen::VectorXd& q,
                                         const Eigen::MatrixXd& e) {
    return contract_frame(bismut_curvature(-1, reduced, q), e);
}

Tensor4<double> oneill_curvature(const QuotientScenario& scn, const Eigen::VectorXd& q,
                                 const Eigen::MatrixXd& e) {
    scn.quotient->require_inside(q);
    const auto& ctx = scn.ctx;
    const int n = ctx.dim(), s = scn.action.size(), k = static_cast<int>(e.cols());
    auto [x, f] = lifted_frame_at<double>(scn, 1, q);
    Eigen::MatrixXd hx = f * e;
    // Connection forms θ^a = G^{ab} g(V_b) of the orthogonal splitting.
    auto theta = [&ctx, &scn](const auto& y) {
        using S = typename std::decay_t<decltype(y)>::Scalar;
        const int nn = ctx.dim(), ss = scn.action.size();
        MatX<S> g = metric_at(ctx.g(), y);
        MatX<S> v(nn, ss);
        for (int b = 0; b < ss; ++b) v.col(b) = scn.action.v[b](y);
        MatX<S> low = v.transpose() * g;
        MatX<S> gram = low * v;
        return flatten_rows<S>(lu_solve<RankError>(gram, low, "orbit Gram matrix is singular"));
    };
    auto dth = d_rows(theta, VecX<double>(x), s, n);
    Eigen::MatrixXd g = metric_at<double>(ctx.g(), x);
    Eigen::MatrixXd v(n, s);
    for (int b = 0; b < s; ++b) v.col(b) = scn.action.v[b](x);
    Eigen::MatrixXd gram = v.transpose() * g * v;
    std::vector<Eigen::MatrixXd> a_vals(s);
    for (int a = 0; a < s; ++a) a_vals[a] = hx.transpose() * dth[a] * hx;
    // ⟨A_X Y, A_Z W⟩ = ¼ dθ^a(X,Y) dθ^b(Z,W) G_ab
    auto ip = [&](int x1, int y1, int z1, int w1) {
        double acc = 0.0;
        for (int a = 0; a < s; ++a)
            for (int b = 0; b < s; ++b) acc += 0.25 * a_vals[a](x1, y1) * a_vals[b](z1, w1) * gram(a, b);
        return acc;
    };
    Tensor4<double> out = contract_frame(riemann(ctx.g(), x), hx);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l)
                for (int m = 0; m < k; ++m)
                    out(i, j, l, m) += -2.0 * ip(i, j, l, m) + ip(j, l, i, m) - ip(i, l, j, m);
    return out;
}

}  // namespace ggred
