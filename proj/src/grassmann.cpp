#include "ggred/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ggred/errors.hpp"

namespace ggred {

namespace {

using Mask = GrassmannElement::Mask;

int popcount(Mask m) { return std::popcount(m); }

}  // namespace

GrassmannElement::GrassmannElement(int n) : n_(n) {
    if (n < 0 || n > kMaxGenerators) throw Error("Grassmann algebra supports at most 16 generators");
}

GrassmannElement::GrassmannElement(int n, std::map<Mask, double> terms) : GrassmannElement(n) {
    for (auto& [m, c] : terms) {
        if (m >> n) throw UnknownGeneratorError("monomial uses a generator beyond " + std::to_string(n));
        if (c != 0.0) terms_.emplace(m, c);
    }
}

GrassmannElement GrassmannElement::scalar(int n, double c) { return GrassmannElement(n, {{0u, c}}); }

GrassmannElement GrassmannElement::generator(int n, int i, double c) {
    if (i < 0 || i >= n) throw UnknownGeneratorError("generator " + std::to_string(i) + " out of range");
    return GrassmannElement(n, {{Mask(1) << i, c}});
}

GrassmannElement GrassmannElement::linear(int n, const Eigen::VectorXd& c, int offset) {
    std::map<Mask, double> t;
    for (int i = 0; i < c.size(); ++i) {
        if (offset + i >= n) throw UnknownGeneratorError("linear form exceeds the generator count");
        t[Mask(1) << (offset + i)] = c(i);
    }
    return GrassmannElement(n, std::move(t));
}

double GrassmannElement::coefficient(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

GrassmannElement GrassmannElement::soul() const {
    GrassmannElement out = *this;
    out.terms_.erase(0u);
    return out;
}

double GrassmannElement::max_abs(int k) const {
    double m = 0.0;
    for (auto& [mask, c] : terms_)
        if (k < 0 || popcount(mask) == k) m = std::max(m, std::abs(c));
    return m;
}

GrassmannElement GrassmannElement::degree(int k) const {
    GrassmannElement out(n_);
    for (auto& [mask, c] : terms_)
        if (popcount(mask) == k) out.terms_.emplace(mask, c);
    return out;
}

bool GrassmannElement::is_even(double tol) const {
    for (auto& [mask, c] : terms_)
        if (popcount(mask) % 2 == 1 && std::abs(c) > tol) return false;
    return true;
}

bool GrassmannElement::is_odd(double tol) const {
    for (auto& [mask, c] : terms_)
        if (popcount(mask) % 2 == 0 && std::abs(c) > tol) return false;
    return true;
}

void GrassmannElement::check_same(const GrassmannElement& o) const {
    if (n_ != o.n_) throw Error("Grassmann elements over different generator sets");
}

GrassmannElement GrassmannElement::add_scaled(const GrassmannElement& o, double s) const {
    // an empty default element acts as zero in any algebra
    if (o.n_ == 0 && o.terms_.empty()) return *this;
    if (n_ == 0 && terms_.empty()) return o * s;
    check_same(o);
    GrassmannElement out = *this;
    for (auto& [m, c] : o.terms_) {
        double& v = out.terms_[m];
        v += s * c;
        if (v == 0.0) out.terms_.erase(m);
    }
    return out;
}

GrassmannElement GrassmannElement::operator+(const GrassmannElement& o) const { return add_scaled(o, 1.0); }
GrassmannElement GrassmannElement::operator-(const GrassmannElement& o) const { return add_scaled(o, -1.0); }
GrassmannElement GrassmannElement::operator-() const { return *this * -1.0; }

GrassmannElement GrassmannElement::operator*(double s) const {
    GrassmannElement out(n_);
    if (s == 0.0) return out;
    for (auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
    return out;
}

int GrassmannElement::product_sign(Mask a, Mask b) {
    if (a & b) return 0;
    // pairs i ∈ a, j ∈ b with i > j must be swapped past each other
    int swaps = 0;
    for (Mask bb = b; bb; bb &= bb - 1) {
        int j = std::countr_zero(bb);
        swaps += popcount(a >> (j + 1));
    }
    return swaps % 2 ? -1 : 1;
}

GrassmannElement GrassmannElement::operator*(const GrassmannElement& o) const {
    if ((n_ == 0 && terms_.empty()) || (o.n_ == 0 && o.terms_.empty())) return GrassmannElement(std::max(n_, o.n_));
    check_same(o);
    std::map<Mask, double> acc;
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : o.terms_) {
            int s = product_sign(ma, mb);
            if (s) acc[ma | mb] += s * ca * cb;
        }
    return GrassmannElement(n_, std::move(acc));
}

GrassmannElement GrassmannElement::exp() const {
    if (!is_even()) throw DegreeError("exp of a non-even Grassmann element");
    GrassmannElement s = soul();
    GrassmannElement term = scalar(n_, 1.0), sum = term;
    for (int k = 1; !term.is_zero() && k <= n_; ++k) {
        term = term * s * (1.0 / k);
        sum += term;
    }
    return sum * std::exp(body());
}

GrassmannElement GrassmannElement::inverse() const {
    const double b = body();
    if (b == 0.0) throw SingularBodyError("Grassmann element with zero body has no inverse");
    GrassmannElement s = soul() * (-1.0 / b);
    GrassmannElement term = scalar(n_, 1.0), sum = term;
    for (int k = 1; !term.is_zero() && k <= n_; ++k) {
        term = term * s;
        sum += term;
    }
    return sum * (1.0 / b);
}

double max_abs_diff(const GrassmannElement& a, const GrassmannElement& b) { return (a - b).max_abs(); }

GrassmannElement berezin_integral(const GrassmannElement& e, const std::vector<int>& generators) {
    const int n = e.generators();
    Mask seen = 0;
    for (int g : generators) {
        if (g < 0 || g >= n) throw UnknownGeneratorError("Berezin measure names generator " + std::to_string(g));
        if (seen & (Mask(1) << g)) throw UnknownGeneratorError("Berezin measure repeats a generator");
        seen |= Mask(1) << g;
    }
    std::map<Mask, double> cur(e.terms().begin(), e.terms().end());
    for (auto it = generators.rbegin(); it != generators.rend(); ++it) {
        const Mask bit = Mask(1) << *it;
        std::map<Mask, double> next;
        for (auto& [m, c] : cur) {
            if (!(m & bit)) continue;
            // left derivative: move θ_g to the front past the lower generators
            int below = std::popcount(m & (bit - 1));
            next[m & ~bit] += (below % 2 ? -c : c);
        }
        cur.swap(next);
    }
    return GrassmannElement(n, std::move(cur));
}

namespace {

void check_antisymmetric(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) throw AsymmetryError("Pfaffian of a non-square matrix");
    if (a.rows() % 2) throw OddDimensionError("Pfaffian needs an even dimension, got " + std::to_string(a.rows()));
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a + a.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw AsymmetryError("matrix is not antisymmetric");
}

double pfaffian_recursive(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    if (n == 0) return 1.0;
    if (n == 2) return a(0, 1);
    double acc = 0.0;
    for (int j = 1; j < n; ++j) {
        if (a(0, j) == 0.0) continue;
        std::vector<int> keep;
        for (int k = 1; k < n; ++k)
            if (k != j) keep.push_back(k);
        Eigen::MatrixXd sub = a(keep, keep);
        acc += ((j - 1) % 2 ? -1.0 : 1.0) * a(0, j) * pfaffian_recursive(sub);
    }
    return acc;
}

double pfaffian_parlett_reid(Eigen::MatrixXd a) {
    const int n = static_cast<int>(a.rows());
    double pf = 1.0;
    for (int k = 0; k < n - 1; k += 2) {
        Eigen::Index p;
        double big = a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&p);
        p += k + 1;
        if (big == 0.0) return 0.0;
        if (p != k + 1) {
            a.row(k + 1).swap(a.row(p));
            a.col(k + 1).swap(a.col(p));
            pf = -pf;
        }
        pf *= a(k, k + 1);
        for (int i = k + 2; i < n; ++i) {
            double tau = a(i, k) / a(k + 1, k);
            a.row(i) -= tau * a.row(k + 1);
            a.col(i) -= tau * a.col(k + 1);
        }
    }
    return pf;
}

}  // namespace

double pfaffian(const Eigen::MatrixXd& a, double tol) {
    check_antisymmetric(a, tol);
    return a.rows() <= 8 ? pfaffian_recursive(a) : pfaffian_parlett_reid(a);
}

double fermionic_gaussian(const Eigen::MatrixXd& a, double tol) { return pfaffian(a, tol); }

double fermionic_gaussian_expanded(const Eigen::MatrixXd& a) {
    check_antisymmetric(a, 1e-10);
    const int n = static_cast<int>(a.rows());
    GrassmannElement x(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a(i, j) != 0.0)
                x += GrassmannElement::generator(n, i) * GrassmannElement::generator(n, j) * (0.5 * a(i, j));
    std::vector<int> measure;
    for (int i = n - 1; i >= 0; --i) measure.push_back(i);
    return berezin_integral(x.exp(), measure).body();
}

GrassmannVector odd_vector(int n, const Eigen::MatrixXd& frame, int offset) {
    GrassmannVector out;
    for (int i = 0; i < frame.rows(); ++i)
        out.push_back(GrassmannElement::linear(n, frame.row(i).transpose(), offset));
    return out;
}

GrassmannElement bilinear(const Eigen::MatrixXd& m, const GrassmannVector& p, const GrassmannVector& q) {
    const int n = p.empty() ? 0 : p[0].generators();
    GrassmannElement acc(n);
    for (int j = 0; j < m.rows(); ++j) {
        GrassmannElement row(n);
        for (int i = 0; i < m.cols(); ++i)
            if (m(j, i) != 0.0) row += q[i] * m(j, i);
        acc += p[j] * row;
    }
    return acc;
}

// --- matrices over the even subalgebra --------------------------------------

namespace {

GrassmannMatrix zeros(int r, int c, int n) {
    return GrassmannMatrix(r, GrassmannVector(c, GrassmannElement(n)));
}

GrassmannMatrix mul(const GrassmannMatrix& a, const GrassmannMatrix& b, int n) {
    const int r = static_cast<int>(a.size()), k = static_cast<int>(b.size());
    const int c = k ? static_cast<int>(b[0].size()) : 0;
    GrassmannMatrix out = zeros(r, c, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            for (int l = 0; l < k; ++l)
                if (!a[i][l].is_zero() && !b[l][j].is_zero()) out[i][j] += a[i][l] * b[l][j];
    return out;
}

GrassmannVector mul(const GrassmannMatrix& a, const GrassmannVector& v, int n) {
    GrassmannVector out(a.size(), GrassmannElement(n));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t l = 0; l < v.size(); ++l)
            if (!a[i][l].is_zero() && !v[l].is_zero()) out[i] += a[i][l] * v[l];
    return out;
}

GrassmannMatrix transpose(const GrassmannMatrix& a, int n, int cols) {
    GrassmannMatrix out = zeros(cols, static_cast<int>(a.size()), n);
    for (size_t i = 0; i < a.size(); ++i)
        for (int j = 0; j < cols; ++j) out[j][i] = a[i][j];
    return out;
}

GrassmannMatrix block(const GrassmannMatrix& a, const std::vector<int>& rows, const std::vector<int>& cols, int n) {
    GrassmannMatrix out = zeros(static_cast<int>(rows.size()), static_cast<int>(cols.size()), n);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) out[i][j] = a[rows[i]][cols[j]];
    return out;
}

GrassmannVector pick(const GrassmannVector& v, const std::vector<int>& idx) {
    GrassmannVector out;
    for (int i : idx) out.push_back(v[i]);
    return out;
}

GrassmannMatrix negate(GrassmannMatrix a) {
    for (auto& row : a)
        for (auto& e : row) e = -e;
    return a;
}

double max_abs(const GrassmannMatrix& a) {
    double m = 0.0;
    for (auto& row : a)
        for (auto& e : row) m = std::max(m, e.max_abs());
    return m;
}

/// Replaces the unknowns in `g` by M u_r + v and returns the polynomial in `r`.
AuxiliaryPolynomial substitute(const AuxiliaryPolynomial& ap, const std::vector<int>& g, const std::vector<int>& r,
                               const GrassmannMatrix& m, const GrassmannVector& v) {
    const int n = ap.generators;
    const int nr = static_cast<int>(r.size());
    std::vector<std::string> groups;
    for (int i : r) groups.push_back(ap.groups[i]);
    AuxiliaryPolynomial out(n, groups);
    GrassmannMatrix arr = block(ap.a, r, r, n), arg = block(ap.a, r, g, n), agg = block(ap.a, g, g, n);
    GrassmannMatrix mt = transpose(m, n, nr);
    GrassmannMatrix argm = mul(arg, m, n);
    GrassmannMatrix mtaggm = mul(mt, mul(agg, m, n), n);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nr; ++j) out.a[i][j] = arr[i][j] + argm[i][j] + argm[j][i] + mtaggm[i][j];
    GrassmannVector bg = pick(ap.b, g), aggv = mul(agg, v, n);
    GrassmannVector t1 = mul(arg, v, n), t2 = mul(mt, aggv, n), t3 = mul(mt, bg, n);
    for (int i = 0; i < nr; ++i) out.b[i] = ap.b[r[i]] + t1[i] + t2[i] + t3[i];
    GrassmannElement c = ap.c;
    for (size_t i = 0; i < g.size(); ++i) c += v[i] * aggv[i] * 0.5 + bg[i] * v[i];
    out.c = c;
    return out;
}

std::vector<int> complement(int size, const std::vector<int>& a, const std::vector<int>& b = {}) {
    std::vector<int> out;
    for (int i = 0; i < size; ++i)
        if (std::find(a.begin(), a.end(), i) == a.end() && std::find(b.begin(), b.end(), i) == b.end())
            out.push_back(i);
    return out;
}

}  // namespace

GrassmannMatrix inverse(const GrassmannMatrix& a, double tol) {
    const int k = static_cast<int>(a.size());
    const int n = k ? a[0][0].generators() : 0;
    Eigen::MatrixXd body(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) body(i, j) = a[i][j].body();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(body);
    if (k && (!lu.isInvertible() || std::abs(lu.determinant()) < tol * std::max(1.0, body.cwiseAbs().maxCoeff())))
        throw SingularBodyError("auxiliary quadratic form has a singular body");
    Eigen::MatrixXd b0 = lu.inverse();
    GrassmannMatrix binv = zeros(k, k, n), step = zeros(k, k, n);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            binv[i][j] = GrassmannElement::scalar(n, b0(i, j));
            // −A0⁻¹ N
            for (int l = 0; l < k; ++l) step[i][j] -= a[l][j].soul() * b0(i, l);
        }
    GrassmannMatrix term = binv, sum = binv;
    for (int it = 0; it <= n; ++it) {
        term = mul(step, term, n);
        if (max_abs(term) == 0.0) break;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sum[i][j] += term[i][j];
    }
    return sum;
}

AuxiliaryPolynomial::AuxiliaryPolynomial(int gens, std::vector<std::string> grp)
    : generators(gens), groups(std::move(grp)), c(gens) {
    const int k = size();
    a = zeros(k, k, gens);
    b.assign(k, GrassmannElement(gens));
}

std::vector<int> AuxiliaryPolynomial::indices(const std::string& group) const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (groups[i] == group) out.push_back(i);
    if (out.empty()) throw Error("auxiliary polynomial has no unknowns in group '" + group + "'");
    return out;
}

void AuxiliaryPolynomial::add_product(int i, int j, const GrassmannElement& s) {
    if (i == j) {
        a[i][i] += s * 2.0;
    } else {
        a[i][j] += s;
        a[j][i] += s;
    }
}

Elimination eliminate_auxiliary(const AuxiliaryPolynomial& ap, const std::string& group, double tol) {
    const int n = ap.generators;
    std::vector<int> g = ap.indices(group), r = complement(ap.size(), g);
    GrassmannMatrix ginv = inverse(block(ap.a, g, g, n), tol);
    GrassmannMatrix m = negate(mul(ginv, block(ap.a, g, r, n), n));
    GrassmannVector v = mul(ginv, pick(ap.b, g), n);
    for (auto& e : v) e = -e;
    Elimination out{substitute(ap, g, r, m, v), r, m, v, 0.0};
    return out;
}

Elimination eliminate_delta_pair(const AuxiliaryPolynomial& ap, const std::string& multiplier,
                                 const std::string& target, double tol) {
    const int n = ap.generators;
    std::vector<int> p = ap.indices(multiplier), q = ap.indices(target);
    if (p.size() != q.size()) throw Error("delta pair groups differ in size");
    if (max_abs(block(ap.a, p, p, n)) > tol)
        throw Error("multiplier group '" + multiplier + "' has a quadratic self-coupling");
    std::vector<int> r = complement(ap.size(), p, q);
    // ∂S/∂u_p = A_pq u_q + A_pr u_r + b_p = 0
    GrassmannMatrix pinv = inverse(block(ap.a, p, q, n), tol);
    GrassmannMatrix mr = negate(mul(pinv, block(ap.a, p, r, n), n));
    GrassmannVector v = mul(pinv, pick(ap.b, p), n);
    for (auto& e : v) e = -e;
    // substitute over p ∪ r, then drop p
    std::vector<int> pr = p;
    pr.insert(pr.end(), r.begin(), r.end());
    GrassmannMatrix m = zeros(static_cast<int>(q.size()), static_cast<int>(pr.size()), n);
    for (size_t i = 0; i < q.size(); ++i)
        for (size_t j = 0; j < r.size(); ++j) m[i][p.size() + j] = mr[i][j];
    AuxiliaryPolynomial full = substitute(ap, q, pr, m, v);
    const int np = static_cast<int>(p.size());
    double dropped = 0.0;
    for (int i = 0; i < np; ++i) {
        dropped = std::max(dropped, full.b[i].max_abs());
        for (int j = 0; j < full.size(); ++j) dropped = std::max(dropped, full.a[i][j].max_abs());
    }
    std::vector<int> keep;
    for (int i = np; i < full.size(); ++i) keep.push_back(i);
    std::vector<std::string> groups;
    for (int i : keep) groups.push_back(full.groups[i]);
    AuxiliaryPolynomial res(n, groups);
    res.a = block(full.a, keep, keep, n);
    res.b = pick(full.b, keep);
    res.c = full.c;
    return Elimination{res, r, mr, v, dropped};
}

}  // namespace ggred
