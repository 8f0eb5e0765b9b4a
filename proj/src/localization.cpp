#include "ggred/localization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ggred/parallel.hpp"

namespace ggred {

namespace {

double identity_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.size() == 0) return 0.0;
    return (a * b - Eigen::MatrixXd::Identity(a.rows(), b.cols())).cwiseAbs().maxCoeff();
}

void fill_metric_data(PointFrame& f, const GeneralizedMetric& ctx) {
    f.g = metric_at<double>(ctx.g(), f.x);
    f.ginv = inverse<SingularMetricError>(f.g, "metric is singular");
    f.h = ctx.h()(f.x);
    f.r_minus = bismut_curvature(-1, ctx, f.x);
    f.gamma = christoffel(ctx.g(), f.x);
    f.gamma_minus = bismut_christoffel_at<double>(ctx, -1, f.x);
}

/// Every product p^i q^j.
GrassmannMatrix outer(const GrassmannVector& p, const GrassmannVector& q) {
    GrassmannMatrix out(p.size(), GrassmannVector(q.size()));
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j) out[i][j] = p[i] * q[j];
    return out;
}

/// ¼ R_{ijkl} ψ₊^i ψ₊^j ψ₋^k ψ₋^l.
GrassmannElement quartic(const Tensor4<double>& r, const GrassmannVector& pp, const GrassmannVector& pm, int gens) {
    const int n = static_cast<int>(pp.size());
    GrassmannMatrix a = outer(pp, pp), b = outer(pm, pm);
    GrassmannElement acc(gens);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (a[i][j].is_zero()) continue;
            GrassmannElement inner(gens);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    if (r(i, j, k, l) != 0.0 && !b[k][l].is_zero()) inner += b[k][l] * r(i, j, k, l);
            acc += a[i][j] * inner * 0.25;
        }
    return acc;
}

/// h^k = ½ H_{ij}^k ψ₋^i ψ₊^j.
GrassmannVector flux_vector(const PointFrame& f, const ZeroModes& z) {
    const int n = f.dim();
    GrassmannMatrix mp = outer(z.psi_minus, z.psi_plus);
    GrassmannVector out(n, GrassmannElement(z.generators));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double c = 0.0;
                for (int l = 0; l < n; ++l) c += f.h((i * n + j) * n + l) * f.ginv(l, k);
                if (c != 0.0) out[k] += mp[i][j] * (0.5 * c);
            }
    return out;
}

/// Model I terms: quartic + ½(F + h, F + h) with F placed at unknowns F = B f.
void add_model_one(AuxiliaryPolynomial& ap, const PointFrame& f, const ZeroModes& z, const Eigen::MatrixXd& basis,
                   int offset) {
    const int n = f.dim(), gens = z.generators;
    GrassmannVector h = flux_vector(f, z);
    GrassmannVector gh(n, GrassmannElement(gens));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            if (f.g(k, l) != 0.0) gh[k] += h[l] * f.g(k, l);
    GrassmannElement hgh(gens);
    for (int k = 0; k < n; ++k) hgh += h[k] * gh[k];
    ap.c += quartic(f.r_minus, z.psi_plus, z.psi_minus, gens) + hgh * 0.5;
    Eigen::MatrixXd bgb = basis.transpose() * f.g * basis;
    for (int p = 0; p < basis.cols(); ++p) {
        for (int q = 0; q < basis.cols(); ++q) ap.a[offset + p][offset + q] += GrassmannElement::scalar(gens, bgb(p, q));
        for (int k = 0; k < n; ++k)
            if (basis(k, p) != 0.0) ap.b[offset + p] += gh[k] * basis(k, p);
    }
}

std::vector<std::string> labels(std::initializer_list<std::pair<const char*, int>> groups) {
    std::vector<std::string> out;
    for (auto& [name, count] : groups) out.insert(out.end(), count, name);
    return out;
}

double constraint_residual(const PointFrame& f, Model model) {
    double r = 0.0;
    if (model == Model::II) {
        for (int a = 0; a < f.actions(); ++a) {
            Eigen::VectorXd rp = f.g * f.v[a] + f.xi[a], rm = f.g * f.v[a] - f.xi[a];
            r = std::max(r, (rp.transpose() * f.zero_plus).cwiseAbs().maxCoeff());
            r = std::max(r, (rm.transpose() * f.zero_minus).cwiseAbs().maxCoeff());
        }
    } else {
        r = std::max(f.sigma.cwiseAbs().maxCoeff(), (f.dsigma * f.zero_plus).cwiseAbs().maxCoeff());
        r = std::max(r, (f.dsigma * f.zero_minus).cwiseAbs().maxCoeff());
    }
    return r;
}

}  // namespace

PointFrame quotient_point_frame(const QuotientScenario& scn, const Eigen::VectorXd& q) {
    if (scn.section)
        throw ScenarioError("Model II localization needs a quotient without a section; '" + scn.name + "' has one");
    scn.quotient->require_inside(q);
    PointFrame f;
    f.x = scn.lift(VecX<double>(q));
    const auto& ctx = scn.ctx;
    fill_metric_data(f, ctx);
    const int s = scn.action.size();
    for (int a = 0; a < s; ++a) {
        Eigen::VectorXd v = scn.action.v[a](f.x), xi = scn.action.xi[a](f.x);
        f.v.push_back(v);
        f.xi.push_back(xi);
        f.v_plus.push_back(v + f.ginv * xi);
        f.v_minus.push_back(v - f.ginv * xi);
        f.dv.push_back(covariant_vector<double>(ctx.g(), scn.action.v[a], f.x));
        f.dxi.push_back(covariant_covector<double>(ctx.g(), scn.action.xi[a], f.x));
        f.mu.push_back(-f.dv.back());
    }
    f.gram.resize(s, s);
    f.k.resize(s, s);
    f.t.resize(s, s);
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) {
            f.gram(a, b) = f.v[a].dot(f.g * f.v[b]);
            f.k(a, b) = f.gram(a, b) - f.xi[a].dot(f.v[b]);
            f.t(a, b) = f.gram(a, b) + f.xi[a].dot(f.ginv * f.xi[b]);
        }
    f.k_inv = inverse<RankError>(f.k, "K is singular");
    f.t_inv = inverse<RankError>(f.t, "T is singular");
    f.zero_plus = lifted_frame(scn, 1, q);
    f.zero_minus = lifted_frame(scn, -1, q);
    return f;
}

PointFrame section_point_frame(const SubmanifoldScenario& scn, const Eigen::VectorXd& u) {
    scn.nchart->require_inside(u);
    PointFrame f;
    f.x = scn.embed(VecX<double>(u));
    const auto& ctx = scn.ctx;
    fill_metric_data(f, ctx);
    const int n = f.dim(), r = scn.section.size();
    Tensor3<double> gp = bismut_christoffel_at<double>(ctx, 1, f.x);
    f.sigma.resize(r);
    f.dsigma.resize(r, n);
    for (int a = 0; a < r; ++a) {
        const auto& s = scn.section.sigma[a];
        f.sigma(a) = s(f.x)(0);
        f.dsigma.row(a) = jacobian(s, VecX<double>(f.x));
        Eigen::MatrixXd hs = hessian(s, VecX<double>(f.x))[0];
        Eigen::MatrixXd np = hs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) np(i, j) -= gp(k, i, j) * f.dsigma(a, k);
        f.hess_sigma.push_back(hs);
        f.nabla_plus_dsigma.push_back(np);
    }
    f.t_up = f.dsigma * f.ginv * f.dsigma.transpose();
    f.t_down = inverse<RankError>(f.t_up, "dσ is degenerate");
    f.zero_plus = push_forward(scn, u, Eigen::MatrixXd::Identity(scn.nchart->dim(), scn.nchart->dim()));
    f.zero_minus = f.zero_plus;
    return f;
}

double frame_inverse_residual(const PointFrame& f) {
    return std::max({identity_residual(f.g, f.ginv), identity_residual(f.k, f.k_inv), identity_residual(f.t, f.t_inv),
                     identity_residual(f.t_up, f.t_down)});
}

ZeroModes zero_modes(const PointFrame& f) {
    if (f.zero_plus.cols() != f.zero_minus.cols() || f.zero_plus.rows() != f.dim())
        throw FrameMismatchError("zero-mode bases have inconsistent shapes");
    const int m = f.zero_modes();
    ZeroModes z;
    z.generators = 2 * m;
    if (z.generators > GrassmannElement::kMaxGenerators)
        throw FrameMismatchError("too many zero modes for the Grassmann algebra");
    z.psi_plus = odd_vector(z.generators, f.zero_plus, 0);
    z.psi_minus = odd_vector(z.generators, f.zero_minus, m);
    return z;
}

GrassmannElement curvature_exponent(const Tensor4<double>& r, int m) {
    const int gens = 2 * m;
    GrassmannVector pp, pm;
    for (int a = 0; a < m; ++a) {
        pp.push_back(GrassmannElement::generator(gens, a));
        pm.push_back(GrassmannElement::generator(gens, m + a));
    }
    return quartic(r, pp, pm, gens);
}

AuxiliaryPolynomial model_two_action(const PointFrame& f, const ZeroModes& z) {
    const int n = f.dim(), s = f.actions(), gens = z.generators;
    AuxiliaryPolynomial ap(gens, labels({{"F", n}, {"phi+-", s}, {"phi++", s}, {"phi--", s}}));
    const int pm = n, pp = n + s, mm = n + 2 * s;
    add_model_one(ap, f, z, Eigen::MatrixXd::Identity(n, n), 0);
    auto num = [gens](double c) { return GrassmannElement::scalar(gens, c); };
    for (int a = 0; a < s; ++a) {
        for (int b = 0; b < s; ++b) {
            // −½G φ₊₋φ₊₋ and ½G φ₊₊φ₋₋ + ½ξ_{ai}V_b^i φ₋₋^a φ₊₊^b
            ap.a[pm + a][pm + b] += num(-f.gram(a, b));
            double c = 0.5 * f.gram(a, b) + 0.5 * f.xi[b].dot(f.v[a]);
            ap.add_product(pp + a, mm + b, num(c));
        }
        // −ξ_{ai} F^i φ₊₋^a
        for (int i = 0; i < n; ++i) ap.add_product(i, pm + a, num(-f.xi[a](i)));
        Eigen::MatrixXd gmu = f.g * f.mu[a];
        Eigen::MatrixXd mug = f.mu[a].transpose() * f.g;
        Eigen::MatrixXd dxit = f.dxi[a].transpose();
        // ½(∇₊ξ_{ai}ψ₋^i − ∇₋ξ_{ai}ψ₊^i) − (ψ₊, μ_aψ₋)
        ap.add_linear(pm + a, bilinear(f.dxi[a], z.psi_plus, z.psi_minus) * 0.5 -
                                  bilinear(f.dxi[a], z.psi_minus, z.psi_plus) * 0.5 -
                                  bilinear(gmu, z.psi_plus, z.psi_minus));
        // ½ψ₋^i∇₋ξ_{ai} − ½(μ_aψ₋, ψ₋)
        ap.add_linear(pp + a, bilinear(dxit, z.psi_minus, z.psi_minus) * 0.5 -
                                  bilinear(mug, z.psi_minus, z.psi_minus) * 0.5);
        // −½ψ₊^i∇₊ξ_{ai} − ½(μ_aψ₊, ψ₊)
        ap.add_linear(mm + a, bilinear(dxit, z.psi_plus, z.psi_plus) * -0.5 -
                                  bilinear(mug, z.psi_plus, z.psi_plus) * 0.5);
    }
    return ap;
}

AuxiliaryPolynomial model_three_action(const PointFrame& f, const ZeroModes& z) {
    const int n = f.dim(), r = f.sections(), k = f.zero_modes(), gens = z.generators;
    AuxiliaryPolynomial ap(gens, labels({{"F_t", k}, {"F_n", r}, {"u", r}}));
    const int uo = k + r;
    Eigen::MatrixXd basis(n, k + r);
    basis << f.zero_plus, f.ginv * f.dsigma.transpose();
    add_model_one(ap, f, z, basis, 0);
    Eigen::MatrixXd dsb = f.dsigma * basis;
    for (int a = 0; a < r; ++a) {
        // u_α ∂_iσ^α F^i
        for (int p = 0; p < k + r; ++p)
            if (dsb(a, p) != 0.0) ap.add_product(uo + a, p, GrassmannElement::scalar(gens, dsb(a, p)));
        // −u_α ∂_i∂_jσ^α ψ₊^j ψ₋^i − u_α ∂_iσ^α Γ^i_{jk} ψ₋^j ψ₊^k
        Eigen::MatrixXd mg = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) mg(j, l) += f.dsigma(a, i) * f.gamma(i, j, l);
        ap.add_linear(uo + a, bilinear(f.hess_sigma[a].transpose(), z.psi_plus, z.psi_minus) * -1.0 -
                                  bilinear(mg, z.psi_minus, z.psi_plus));
    }
    return ap;
}

LocalizationResult localize_model(const PointFrame& f, Model model, EliminationOrder order, double tol) {
    LocalizationResult out;
    out.zero_modes = f.zero_modes();
    out.constraint_residual = constraint_residual(f, model);
    if (out.constraint_residual > tol)
        throw FrameMismatchError("zero-mode bases violate their constraints by " +
                                 std::to_string(out.constraint_residual));
    ZeroModes z = zero_modes(f);
    if (model == Model::II) {
        if (f.actions() == 0) throw FrameMismatchError("Model II needs the action data in the frame");
        auto delta = eliminate_delta_pair(model_two_action(f, z), "phi++", "phi--");
        out.delta_residual = delta.dropped_residual;
        if (order == EliminationOrder::FieldFirst) {
            auto ef = eliminate_auxiliary(delta.result, "F");
            auto ep = eliminate_auxiliary(ef.result, "phi+-");
            out.phi_pm = ep.v;
            out.exponent = ep.result.c;
        } else {
            auto ep = eliminate_auxiliary(delta.result, "phi+-");
            out.exponent = eliminate_auxiliary(ep.result, "F").result.c;
        }
    } else {
        if (f.sections() == 0) throw FrameMismatchError("Model III needs the section data in the frame");
        auto ap = model_three_action(f, z);
        auto en = eliminate_auxiliary(ap, "F_n");
        auto et = eliminate_auxiliary(en.result, "F_t");
        out.exponent = eliminate_auxiliary(et.result, "u").result.c;
    }
    return out;
}

GrassmannVector phi_pm_closed_form(const PointFrame& f, const ZeroModes& z) {
    const int n = f.dim(), s = f.actions();
    GrassmannVector bracket;
    for (int b = 0; b < s; ++b) {
        Eigen::MatrixXd gdv = (f.g * f.dv[b]).transpose();  // (j, i) = g_{ik}(∇_j V)^k
        Eigen::MatrixXd lm = gdv - f.dxi[b], lp = gdv + f.dxi[b];
        Eigen::VectorXd up = f.ginv * f.xi[b];
        Eigen::MatrixXd hx = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) hx(i, j) += f.h((i * n + j) * n + l) * up(l);
        bracket.push_back(bilinear(lm, z.psi_plus, z.psi_minus) + bilinear(lp, z.psi_minus, z.psi_plus) -
                          bilinear(hx, z.psi_minus, z.psi_plus));
    }
    GrassmannVector out(s, GrassmannElement(z.generators));
    for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) out[a] += bracket[b] * (-0.5 * f.t_inv(a, b));
    return out;
}

double pfaffian_density(const Tensor4<double>& r_hat) {
    const int d = static_cast<int>(r_hat.dimension(0));
    if (d % 2) throw OddDimensionError("Pfaffian density needs an even dimension");
    GrassmannElement e = (-curvature_exponent(r_hat, d)).exp();
    std::vector<int> measure(2 * d);
    std::iota(measure.rbegin(), measure.rend(), 0);
    return berezin_integral(e, measure).body();
}

double pfaffian_density_expansion(const Tensor4<double>& r_hat) {
    const int d = static_cast<int>(r_hat.dimension(0));
    if (d % 2) throw OddDimensionError("Pfaffian density needs an even dimension");
    const int k = d / 2;
    std::vector<int> sig(d), tau(d);
    std::iota(sig.begin(), sig.end(), 0);
    double acc = 0.0;
    do {
        const int ss = permutation_sign(sig);
        std::iota(tau.begin(), tau.end(), 0);
        do {
            double prod = ss * permutation_sign(tau);
            for (int j = 0; j < k && prod != 0.0; ++j)
                prod *= r_hat(tau[2 * j], tau[2 * j + 1], sig[2 * j + 1], sig[2 * j]);
            acc += prod;
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sig.begin(), sig.end()));
    double norm = std::ldexp(1.0, 2 * k);
    for (int j = 2; j <= k; ++j) norm *= j;
    return acc / norm;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
    if (n < 1) throw Error("Gauss–Legendre order must be positive");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double b = k / std::sqrt(4.0 * k * k - 1.0);
        jac(k, k - 1) = jac(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
    return {es.eigenvalues(), w};
}

double euler_characteristic(const EulerDomain& dom, int order, int sign, int jobs) {
    const int d = dom.ctx.dim();
    if (d % 2) throw OddDimensionError("Euler characteristic needs an even dimension, got " + std::to_string(d));
    auto [nodes, weights] = gauss_legendre(order);
    int total = 1;
    for (int i = 0; i < d; ++i) total *= order;
    Eigen::VectorXd half = 0.5 * (dom.hi - dom.lo), mid = 0.5 * (dom.hi + dom.lo);
    std::vector<double> vals(total, 0.0);
    parallel_for(total, jobs, [&](int idx) {
        Eigen::VectorXd x(d);
        double w = 1.0;
        for (int i = 0, rem = idx; i < d; ++i, rem /= order) {
            x(i) = mid(i) + half(i) * nodes(rem % order);
            w *= weights(rem % order) * half(i);
        }
        Eigen::MatrixXd g = metric_at<double>(dom.ctx.g(), x);
        Eigen::MatrixXd e = gram_schmidt(Eigen::MatrixXd::Identity(d, d), g);
        Tensor4<double> rh = contract_frame(bismut_curvature(sign, dom.ctx, x), e);
        vals[idx] = w * pfaffian_density(rh) * std::sqrt(g.determinant());
    });
    double sum = 0.0;
    for (double v : vals) sum += v;
    return sum * std::pow(2.0 * M_PI, -0.5 * d);
}

}  // namespace ggred
