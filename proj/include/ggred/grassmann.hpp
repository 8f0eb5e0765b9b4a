#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ggred {

/// Element of the Grassmann algebra on n ≤ 16 generators θ_0 … θ_{n−1}. A
/// monomial is a bitmask; its coefficient multiplies θ_{i1}θ_{i2}… with
/// i1 < i2 < … ascending.
class GrassmannElement {
public:
    using Mask = std::uint32_t;
    static constexpr int kMaxGenerators = 16;

    GrassmannElement() = default;
    explicit GrassmannElement(int n);
    GrassmannElement(int n, std::map<Mask, double> terms);

    static GrassmannElement scalar(int n, double c);
    static GrassmannElement generator(int n, int i, double c = 1.0);
    /// Σ_i c_i θ_{offset + i}.
    static GrassmannElement linear(int n, const Eigen::VectorXd& c, int offset = 0);

    int generators() const { return n_; }
    const std::map<Mask, double>& terms() const { return terms_; }
    double coefficient(Mask m) const;
    double body() const { return coefficient(0); }
    GrassmannElement soul() const;
    bool is_zero() const { return terms_.empty(); }
    /// Largest |coefficient| over monomials of degree `k`, or over all if k < 0.
    double max_abs(int k = -1) const;
    /// Part of homogeneous degree k.
    GrassmannElement degree(int k) const;
    bool is_even(double tol = 0.0) const;
    bool is_odd(double tol = 0.0) const;

    GrassmannElement operator+(const GrassmannElement& o) const;
    GrassmannElement operator-(const GrassmannElement& o) const;
    GrassmannElement operator-() const;
    GrassmannElement operator*(const GrassmannElement& o) const;
    GrassmannElement operator*(double s) const;
    GrassmannElement& operator+=(const GrassmannElement& o) { return *this = *this + o; }
    GrassmannElement& operator-=(const GrassmannElement& o) { return *this = *this - o; }

    /// exp of an even element: e^{body} Σ soul^k / k!.
    GrassmannElement exp() const;
    /// Inverse of an even element with non-zero body.
    GrassmannElement inverse() const;

    /// Sign of θ_a θ_b relative to the ascending monomial a ∪ b; 0 if they overlap.
    static int product_sign(Mask a, Mask b);

private:
    void check_same(const GrassmannElement& o) const;
    GrassmannElement add_scaled(const GrassmannElement& o, double s) const;

    int n_ = 0;
    std::map<Mask, double> terms_;
};

inline GrassmannElement operator*(double s, const GrassmannElement& e) { return e * s; }

double max_abs_diff(const GrassmannElement& a, const GrassmannElement& b);

/// ∫ dθ_{g1} … dθ_{gk} e, applying the left derivative of the last listed
/// generator first, so ∫ dθ⁺dθ⁻ θ⁻θ⁺ = 1 and ∫ dθ_k … dθ_1 θ_1 … θ_k = 1.
GrassmannElement berezin_integral(const GrassmannElement& e, const std::vector<int>& generators);

/// Pf(A) of an antisymmetric matrix: recursive expansion for n ≤ 8 and
/// Parlett–Reid elimination above.
double pfaffian(const Eigen::MatrixXd& a, double tol = 1e-10);

/// ∫ exp(½ψᵀAψ) dψ_n … dψ_1 evaluated as a Pfaffian.
double fermionic_gaussian(const Eigen::MatrixXd& a, double tol = 1e-10);

/// The same integral computed by expanding the exponential in the algebra.
double fermionic_gaussian_expanded(const Eigen::MatrixXd& a);

using GrassmannVector = std::vector<GrassmannElement>;
using GrassmannMatrix = std::vector<std::vector<GrassmannElement>>;

/// Vector of odd elements ψ^i = Σ_α F(i, α) θ_{offset + α}.
GrassmannVector odd_vector(int n, const Eigen::MatrixXd& frame, int offset);

/// Σ_{j,i} M(j, i) p^j q^i, preserving the p-before-q order.
GrassmannElement bilinear(const Eigen::MatrixXd& m, const GrassmannVector& p, const GrassmannVector& q);

/// Inverse of a matrix of even elements whose body is invertible, by the
/// Neumann series on the nilpotent part (terminates exactly).
GrassmannMatrix inverse(const GrassmannMatrix& a, double tol = 1e-12);

/// S(u) = ½ uᵀ A u + bᵀ u + c over even unknowns u whose coefficients are even
/// Grassmann elements. Each unknown carries a group label.
struct AuxiliaryPolynomial {
    int generators = 0;
    std::vector<std::string> groups;
    GrassmannMatrix a;
    GrassmannVector b;
    GrassmannElement c;

    AuxiliaryPolynomial() = default;
    AuxiliaryPolynomial(int generators, std::vector<std::string> groups);

    int size() const { return static_cast<int>(groups.size()); }
    std::vector<int> indices(const std::string& group) const;
    /// Adds s·u_i u_j to S (both orders, so the quadratic stays symmetric).
    void add_product(int i, int j, const GrassmannElement& s);
    void add_linear(int i, const GrassmannElement& s) { b[i] += s; }
};

/// Result of removing one group: the stationary solution u_g = M u_rest + v in
/// terms of the kept unknowns (listed by their old indices).
struct Elimination {
    AuxiliaryPolynomial result;
    std::vector<int> kept;
    GrassmannMatrix m;
    GrassmannVector v;
    double dropped_residual = 0.0;  // delta pairs: size of what the multiplier still touched
};

/// Substitutes the stationary point of S in `group`.
Elimination eliminate_auxiliary(const AuxiliaryPolynomial& ap, const std::string& group, double tol = 1e-12);

/// Delta pair: integrating the multiplier group (no quadratic self-coupling)
/// imposes ∂S/∂u_mult = 0, which is solved for `target`. Both groups are removed.
Elimination eliminate_delta_pair(const AuxiliaryPolynomial& ap, const std::string& multiplier,
                                 const std::string& target, double tol = 1e-12);

}  // namespace ggred
