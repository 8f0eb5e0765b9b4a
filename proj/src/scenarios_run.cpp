#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

#include "ggred/fields.hpp"
#include "ggred/linalg.hpp"
#include "ggred/models.hpp"
#include "ggred/parallel.hpp"
#include "ggred/scenarios.hpp"

namespace ggred {

namespace {

constexpr double kIdentityTol = 1e-8;
constexpr double kCrossTol = 1e-6;
constexpr double kPfaffianTol = 1e-10;
constexpr int kDefaultSamples = 20;
constexpr int kPfaffianMatrices = 1000;

struct Setup {
    std::optional<GeneralizedMetric> ctx;  // ambient
    std::optional<QuotientScenario> quotient;
    std::optional<SubmanifoldScenario> sub;
    std::optional<GKScenario> gk;
    std::optional<BiHermitianData> kahler;  // GK data for a quotient scenario
    std::optional<EulerDomain> euler;
    double euler_expected = 0.0, euler_tol = 0.0;
    bool euler_exploratory = false;
    double sectional = std::numeric_limits<double>::quiet_NaN();  // known constant curvature of the result
    bool untwisted = false;                                       // H = 0 and ξ = 0
};

struct Context {
    const Setup& s;
    const std::map<std::string, double>& p;
    double identity_tol, cross_tol;
    int samples, jobs;
};

ChartField scaled(const ChartField& f, double s) {
    return ChartField::make(f.chart_ptr(), f.valence(), [f, s](const auto& x) {
        using V = std::decay_t<decltype(x)>;
        V out = f(x);
        for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = out(i) * s;
        return out;
    });
}

Setup build_setup(const std::string& name, const std::map<std::string, double>& p) {
    Setup s;
    auto quotient = [&](QuotientScenario q) {
        s.ctx = q.ctx;
        s.quotient = std::move(q);
    };
    if (name == "flat_torus") {
        s.euler = euler_torus();
        s.euler_tol = 1e-10;
    } else if (name == "round_sphere") {
        s.euler = euler_sphere(p.at("radius"));
        s.euler_expected = 2.0;
        s.euler_tol = 0.02;
    } else if (name == "sphere_product") {
        s.euler = euler_sphere_product();
        s.euler_expected = 4.0;
        s.euler_tol = 0.08;
    } else if (name == "hopf" || name == "hopf_flux") {
        const double lambda = p.at("lambda");
        auto q = hopf_quotient(lambda);
        if (p.at("xi_scale") != 1.0) q.action.xi[0] = scaled(q.action.xi[0], p.at("xi_scale"));
        s.untwisted = lambda == 0.0;
        if (lambda == 0.0) s.sectional = 4.0;
        quotient(std::move(q));
    } else if (name == "product_qg") {
        s.untwisted = p.at("c") == 0.0;
        if (s.untwisted) s.sectional = 1.0;
        quotient(product_quotient(p.at("c")));
    } else if (name == "hopf_torus") {
        quotient(hopf_torus_quotient(p.at("lambda"), p.at("nu"), p.at("mu")));
    } else if (name == "kahler_hopf") {
        quotient(kahler_hopf_quotient());
        s.kahler = kahler_structures(s.ctx->g().chart_ptr());
    } else if (name == "sphere_in_flat") {
        s.sub = sphere_in_flat(p.at("c"));
        s.ctx = s.sub->ctx;
        s.sectional = 1.0;
    } else if (name == "s3xs1_gk") {
        s.gk = s3xs1_gk(p.at("lambda"), true);
        s.ctx = s.gk->ctx;
        s.euler = euler_s3xs1(p.at("lambda"));
        s.euler_exploratory = true;
        s.euler_tol = kCrossTol;
    } else {
        throw ConfigError("unknown scenario '" + name + "'");
    }
    if (!s.ctx) s.ctx = s.euler->ctx;
    return s;
}

std::string describe_condition(const std::string& c) {
    if (c == "isotropy") return "isotropy ξ_a(V_b) + ξ_b(V_a) = 0";
    if (c == "equivariance") return "equivariance dξ_a = ι_{V_a}H";
    return "invariance L_{V_a}g = 0, L_{V_a}H = 0";
}

/// Invariant checks that must hold before any check runs.
void check_setup(const Setup& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pts = s.ctx->chart().sample(5, rng, 0.05);
    auto v = s.ctx->validate(pts);
    if (v.symmetry > kIdentityTol || v.min_eigenvalue <= 0.0)
        throw ScenarioError("metric is not symmetric positive definite on the chart");
    if (v.dh > kIdentityTol || v.h_antisymmetry > kIdentityTol) throw ScenarioError("H is not a closed 3-form");
    if (s.quotient) {
        std::vector<Eigen::VectorXd> xs;
        for (const auto& q : s.quotient->quotient->sample(5, rng, 0.05)) xs.push_back(s.quotient->lift(q));
        auto failed = validate_extended_action(s.quotient->action, s.quotient->ctx, xs).failed(kIdentityTol);
        if (!failed.empty()) {
            std::string msg = "extended action violates";
            for (size_t i = 0; i < failed.size(); ++i) msg += (i ? "; " : " ") + describe_condition(failed[i]);
            throw ScenarioError(msg);
        }
        auto qv = validate_quotient(*s.quotient, s.quotient->quotient->sample(5, rng, 0.05));
        if (qv.dim_mismatch != 0 || qv.section_roundtrip > kIdentityTol || qv.vertical_kernel > kIdentityTol)
            throw ScenarioError("projection and lift are inconsistent");
    }
    if (s.sub) {
        auto sv = validate_submanifold(*s.sub, s.sub->nchart->sample(5, rng, 0.05));
        if (sv.on_locus > kLocusTolerance) throw ScenarioError("embedding leaves the zero locus of σ");
    }
}

/// Max of f over [0, count) evaluated in parallel; NaN if any value is NaN.
double parallel_max(int count, int jobs, const std::function<double(int)>& f) {
    std::vector<double> r(count, 0.0);
    parallel_for(count, jobs, [&](int i) { r[i] = f(i); });
    double m = 0.0;
    for (double v : r) {
        if (std::isnan(v)) return v;
        m = std::max(m, v);
    }
    return m;
}

Eigen::MatrixXd orthonormal(const ChartField& g, const Eigen::VectorXd& x) {
    Eigen::MatrixXd gm = metric_at<double>(g, x);
    return gram_schmidt(Eigen::MatrixXd::Identity(gm.rows(), gm.cols()), gm);
}

std::vector<Eigen::VectorXd> quotient_points(const Context& c, std::mt19937_64& rng) {
    return c.s.quotient->quotient->sample(c.samples, rng, 0.05);
}

CheckRecord make(const std::string& id, int points, double res, double tol) {
    return CheckRecord{id, points, res, tol, res <= tol ? "pass" : "fail", 0.0};
}

CheckRecord check_courant(const Context& c, std::mt19937_64& rng) {
    const auto& ctx = *c.s.ctx;
    auto pts = ctx.chart().sample(c.samples, rng, 0.05);
    std::vector<std::pair<ChartField, ChartField>> fields;
    for (int i = 0; i < c.samples; ++i) {
        auto x = random_vector_field(ctx.g().chart_ptr(), rng);
        fields.emplace_back(x, random_vector_field(ctx.g().chart_ptr(), rng));
    }
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        double m = 0.0;
        for (int sign : {1, -1})
            m = std::max(m, (bismut_via_courant(fields[i].first, fields[i].second, sign, ctx, pts[i]) -
                             bismut_derivative(fields[i].first, fields[i].second, sign, ctx, pts[i]))
                                .cwiseAbs()
                                .maxCoeff());
        return m;
    });
    return make("courant", c.samples, r, c.identity_tol);
}

CheckRecord check_pair_symmetry(const Context& c, std::mt19937_64& rng) {
    const auto& ctx = *c.s.ctx;
    auto pts = ctx.chart().sample(c.samples, rng, 0.05);
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        return pair_symmetry_residual(bismut_curvature(-1, ctx, pts[i]), bismut_curvature(1, ctx, pts[i]));
    });
    return make("pair_symmetry", c.samples, r, c.identity_tol);
}

CheckRecord check_identities(const Context& c, std::mt19937_64& rng) {
    const auto& ctx = *c.s.ctx;
    auto pts = ctx.chart().sample(c.samples, rng, 0.05);
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        auto v = ctx.validate({pts[i]});
        auto cs = curvature_symmetry(riemann(ctx.g(), pts[i]));
        return std::max({v.dh, v.h_antisymmetry, v.symmetry, metric_compatibility_residual(ctx.g(), pts[i]),
                         cs.antisym_first, cs.antisym_second, cs.pair, cs.bianchi});
    });
    return make("identities", c.samples, r, c.identity_tol);
}

CheckRecord check_extended_action(const Context& c, std::mt19937_64& rng) {
    const auto& q = *c.s.quotient;
    std::vector<Eigen::VectorXd> xs;
    for (const auto& p : quotient_points(c, rng)) xs.push_back(q.lift(p));
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        return validate_extended_action(q.action, q.ctx, {xs[i]}).worst_identity();
    });
    return make("extended_action", c.samples, r, c.identity_tol);
}

CheckRecord check_lemma62(const Context& c, std::mt19937_64& rng) {
    const auto& q = *c.s.quotient;
    auto qs = quotient_points(c, rng);
    const SectionData* sec = q.section ? &*q.section : nullptr;
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        Eigen::VectorXd x = q.lift(qs[i]);
        auto [tp, tm] = horizontal_frames(q.action, q.ctx, x, sec);
        return std::max(omega_curvature(q.action, q.ctx, 1, x, tp).residual(),
                        omega_curvature(q.action, q.ctx, -1, x, tm).residual());
    });
    return make("lemma62", c.samples, r, c.identity_tol);
}

CheckRecord check_thm63(const Context& c, std::mt19937_64& rng) {
    const auto& q = *c.s.quotient;
    auto qs = quotient_points(c, rng);
    auto rctx = reduced_context(q);
    const double k = c.s.sectional;
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        Eigen::MatrixXd e = orthonormal(rctx.g(), qs[i]);
        auto dir = reduced_curvature_direct(rctx, qs[i], e);
        double m = max_abs_diff(reduced_curvature_quotient(q, qs[i], e), dir);
        if (!std::isnan(k) && q.quotient_dim() == 2) m = std::max(m, std::abs(dir(0, 1, 1, 0) - k));
        return m;
    });
    return make("thm63", c.samples, r, c.cross_tol);
}

CheckRecord check_oneill(const Context& c, std::mt19937_64& rng) {
    const auto& q = *c.s.quotient;
    auto qs = quotient_points(c, rng);
    auto rctx = reduced_context(q);
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        Eigen::MatrixXd e = orthonormal(rctx.g(), qs[i]);
        auto one = oneill_curvature(q, qs[i], e);
        return std::max(max_abs_diff(reduced_curvature_quotient(q, qs[i], e), one),
                        max_abs_diff(reduced_curvature_direct(rctx, qs[i], e), one));
    });
    return make("oneill", c.samples, r, c.cross_tol);
}

CheckRecord check_thm65(const Context& c, std::mt19937_64& rng) {
    const auto& sub = *c.s.sub;
    auto us = sub.nchart->sample(c.samples, rng, 0.05);
    auto induced = induced_context(sub);
    const double k = c.s.sectional;
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        Eigen::MatrixXd e = orthonormal(induced.g(), us[i]);
        auto thm = reduced_curvature_sub(sub, sub.embed(us[i]), push_forward(sub, us[i], e));
        double m = max_abs_diff(thm, reduced_curvature_direct(induced, us[i], e));
        if (!std::isnan(k) && sub.nchart->dim() == 2) m = std::max(m, std::abs(thm(0, 1, 1, 0) - k));
        return m;
    });
    return make("thm65", c.samples, r, c.cross_tol);
}

CheckRecord check_localization(const Context& c, std::mt19937_64& rng) {
    double r;
    if (c.s.quotient) {
        const auto& q = *c.s.quotient;
        auto qs = quotient_points(c, rng);
        const int m = q.quotient_dim();
        r = parallel_max(c.samples, c.jobs, [&](int i) {
            auto res = localize_model(quotient_point_frame(q, qs[i]), Model::II);
            auto rc = reduced_curvature_quotient(q, qs[i], Eigen::MatrixXd::Identity(m, m));
            return max_abs_diff(res.exponent, curvature_exponent(rc, m));
        });
    } else {
        const auto& sub = *c.s.sub;
        auto us = sub.nchart->sample(c.samples, rng, 0.05);
        const int k = sub.nchart->dim();
        r = parallel_max(c.samples, c.jobs, [&](int i) {
            PointFrame f = section_point_frame(sub, us[i]);
            auto res = localize_model(f, Model::III);
            return max_abs_diff(res.exponent, curvature_exponent(reduced_curvature_sub(sub, f.x, f.zero_plus), k));
        });
    }
    return make("localization", c.samples, r, c.cross_tol);
}

CheckRecord check_phi(const Context& c, std::mt19937_64& rng) {
    const auto& q = *c.s.quotient;
    auto qs = quotient_points(c, rng);
    double r = parallel_max(c.samples, c.jobs, [&](int i) {
        PointFrame f = quotient_point_frame(q, qs[i]);
        auto res = localize_model(f, Model::II);
        auto closed = phi_pm_closed_form(f, zero_modes(f));
        double m = 0.0;
        for (size_t a = 0; a < closed.size(); ++a) m = std::max(m, max_abs_diff(closed[a], res.phi_pm[a]));
        return m;
    });
    return make("phi_closed_form", c.samples, r, c.identity_tol);
}

CheckRecord check_euler(const Context& c, std::mt19937_64&) {
    const int order = static_cast<int>(c.p.at("order"));
    const auto& dom = *c.s.euler;
    double chi = euler_characteristic(dom, order, -1, c.jobs);
    int points = 1;
    for (int i = 0; i < dom.ctx.dim(); ++i) points *= order;
    CheckRecord rec = make("euler", points, std::abs(chi - c.s.euler_expected), c.s.euler_tol);
    rec.value = chi;
    if (c.s.euler_exploratory) rec.status = "exploratory";
    return rec;
}

CheckRecord check_pfaffian(const Context&, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int t = 0; t < kPfaffianMatrices; ++t) {
        const int n = 2 * (1 + t % 4);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                a(i, j) = nd(rng);
                a(j, i) = -a(i, j);
            }
        double pf = pfaffian(a), det = a.determinant();
        worst = std::max(worst, std::abs(pf * pf - det) / std::max(1.0, std::abs(det)));
    }
    return make("pfaffian", kPfaffianMatrices, worst, kPfaffianTol);
}

CheckRecord check_gk(const Context& c, std::mt19937_64& rng) {
    if (c.s.gk) {
        auto pts = c.s.gk->ctx.chart().sample(c.samples, rng, 0.05);
        auto v = validate_bihermitian(c.s.gk->bh, c.s.gk->ctx, pts, rng);
        return make("gk", c.samples, v.worst(), c.identity_tol);
    }
    const auto& q = *c.s.quotient;
    auto qs = quotient_points(c, rng);
    double tau = 0.0;
    for (const auto& p : qs) {
        auto [dp, dm] = check_tau_invariance(*c.s.kahler, q.action, q.ctx, q.lift(p), q.section ? &*q.section : nullptr);
        tau = std::max({tau, dp, dm});
    }
    if (tau > c.cross_tol) return make("gk", c.samples, tau, c.cross_tol);
    auto red = reduce_gk(q, *c.s.kahler, qs, rng);
    return make("gk", c.samples, std::max(tau, red.validation.worst()), c.cross_tol);
}

using CheckFn = CheckRecord (*)(const Context&, std::mt19937_64&);

CheckFn check_fn(const std::string& id) {
    static const std::map<std::string, CheckFn> fns{
        {"courant", check_courant},       {"pair_symmetry", check_pair_symmetry},
        {"identities", check_identities}, {"extended_action", check_extended_action},
        {"lemma62", check_lemma62},       {"thm63", check_thm63},
        {"oneill", check_oneill},         {"thm65", check_thm65},
        {"localization", check_localization}, {"phi_closed_form", check_phi},
        {"euler", check_euler},           {"pfaffian", check_pfaffian},
        {"gk", check_gk},
    };
    return fns.at(id);
}

/// Per-check stream so adding or removing checks leaves the others unchanged.
std::mt19937_64 check_rng(std::uint64_t seed, const std::string& id) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : id) h = (h ^ ch) * 1099511628211ull;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
    return std::mt19937_64(seq);
}

struct Resolved {
    std::map<std::string, double> params, tolerances;
    std::vector<std::string> checks;
};

Resolved resolve(const ScenarioConfig& config) {
    check_config(config);
    const ScenarioInfo& info = find_scenario(config.scenario);
    Resolved r;
    r.params = info.defaults;
    r.params["samples"] = kDefaultSamples;
    for (const auto& [k, v] : config.parameters) r.params[k] = v;
    r.tolerances = {{"identity", kIdentityTol}, {"cross", kCrossTol}};
    for (const auto& [k, v] : config.tolerances) r.tolerances[k] = v;
    r.checks = config.checks.empty() ? info.checks : config.checks;
    return r;
}

/// O'Neill only applies untwisted: dropped from the defaults, an error if asked for.
void settle_checks(Resolved& r, const Setup& s, const ScenarioConfig& config) {
    if (s.untwisted) return;
    auto it = std::find(r.checks.begin(), r.checks.end(), "oneill");
    if (it == r.checks.end()) return;
    if (!config.checks.empty())
        throw ConfigError("check 'oneill' needs H = 0 and ξ = 0 (set the flux parameter to 0)");
    r.checks.erase(it);
}

}  // namespace

void validate_scenario(const ScenarioConfig& config) {
    Resolved r = resolve(config);
    Setup s = build_setup(config.scenario, r.params);
    check_setup(s, config.seed);
    settle_checks(r, s, config);
}

ScenarioReport run_scenario(const ScenarioConfig& config, int jobs) {
    Resolved r = resolve(config);
    Setup s = build_setup(config.scenario, r.params);
    check_setup(s, config.seed);
    settle_checks(r, s, config);
    ScenarioReport rep;
    rep.scenario = config.scenario;
    rep.parameters = r.params;
    rep.tolerances = r.tolerances;
    rep.seed = config.seed;
    Context ctx{s, r.params, r.tolerances.at("identity"), r.tolerances.at("cross"),
                static_cast<int>(r.params.at("samples")), std::max(1, jobs)};
    for (const auto& id : r.checks) {
        auto rng = check_rng(config.seed, id);
        CheckRecord rec = check_fn(id)(ctx, rng);
        if (rec.status == "fail") rep.pass = false;
        rep.checks.push_back(rec);
    }
    return rep;
}

}  // namespace ggred
