#pragma once

#include <Eigen/Core>
#include <cmath>
#include <type_traits>

namespace ggred {

/// Forward-mode dual number a + b·ε with ε² = 0. Nesting Dual<Dual<T>> gives
/// exact mixed second partials; the library stacks up to three levels.
template <typename T>
struct Dual {
    T a{};  // primal
    T b{};  // tangent

    Dual() = default;
    Dual(double v) : a(v), b(0.0) {}  // NOLINT(google-explicit-constructor)
    template <typename U = T, typename = std::enable_if_t<!std::is_same_v<U, double>>>
    Dual(const T& v) : a(v), b(0.0) {}  // NOLINT(google-explicit-constructor)
    Dual(const T& v, const T& d) : a(v), b(d) {}

    Dual& operator+=(const Dual& o) { a += o.a; b += o.b; return *this; }
    Dual& operator-=(const Dual& o) { a -= o.a; b -= o.b; return *this; }
    Dual& operator*=(const Dual& o) { b = a * o.b + b * o.a; a *= o.a; return *this; }
    Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }

    friend Dual operator+(const Dual& x, const Dual& y) { return {x.a + y.a, x.b + y.b}; }
    friend Dual operator-(const Dual& x, const Dual& y) { return {x.a - y.a, x.b - y.b}; }
    friend Dual operator*(const Dual& x, const Dual& y) { return {x.a * y.a, x.a * y.b + x.b * y.a}; }
    friend Dual operator/(const Dual& x, const Dual& y) {
        T inv = T(1.0) / y.a;
        return {x.a * inv, (x.b * y.a - x.a * y.b) * inv * inv};
    }
    friend Dual operator-(const Dual& x) { return {-x.a, -x.b}; }
    friend Dual operator+(const Dual& x) { return x; }

    friend Dual operator+(const Dual& x, double s) { return {x.a + s, x.b}; }
    friend Dual operator+(double s, const Dual& x) { return {x.a + s, x.b}; }
    friend Dual operator-(const Dual& x, double s) { return {x.a - s, x.b}; }
    friend Dual operator-(double s, const Dual& x) { return {T(s) - x.a, -x.b}; }
    friend Dual operator*(const Dual& x, double s) { return {x.a * s, x.b * s}; }
    friend Dual operator*(double s, const Dual& x) { return {x.a * s, x.b * s}; }
    friend Dual operator/(const Dual& x, double s) { return {x.a / s, x.b / s}; }
    friend Dual operator/(double s, const Dual& x) { return Dual(s) / x; }

    // Comparisons look at the innermost primal value only.
    friend bool operator<(const Dual& x, const Dual& y) { return x.a < y.a; }
    friend bool operator>(const Dual& x, const Dual& y) { return x.a > y.a; }
    friend bool operator<=(const Dual& x, const Dual& y) { return x.a <= y.a; }
    friend bool operator>=(const Dual& x, const Dual& y) { return x.a >= y.a; }
    friend bool operator==(const Dual& x, const Dual& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const Dual& x, const Dual& y) { return !(x == y); }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

template <typename T>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};

/// Nesting depth: 0 for double, 1 for D1, ...
template <typename T>
struct dual_depth : std::integral_constant<int, 0> {};
template <typename T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

inline double primal(double x) { return x; }
template <typename T>
double primal(const Dual<T>& x) { return primal(x.a); }

using std::abs;
using std::atan2;
using std::cos;
using std::exp;
using std::log;
using std::sin;
using std::sqrt;

template <typename T>
Dual<T> sin(const Dual<T>& x) { return {sin(x.a), x.b * cos(x.a)}; }
template <typename T>
Dual<T> cos(const Dual<T>& x) { return {cos(x.a), -(x.b * sin(x.a))}; }
template <typename T>
Dual<T> exp(const Dual<T>& x) { T e = exp(x.a); return {e, x.b * e}; }
template <typename T>
Dual<T> log(const Dual<T>& x) { return {log(x.a), x.b / x.a}; }
template <typename T>
Dual<T> sqrt(const Dual<T>& x) { T r = sqrt(x.a); return {r, x.b / (2.0 * r)}; }
template <typename T>
Dual<T> abs(const Dual<T>& x) { return primal(x.a) < 0.0 ? -x : x; }
template <typename T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
    T r2 = x.a * x.a + y.a * y.a;
    return {atan2(y.a, x.a), (x.a * y.b - y.a * x.b) / r2};
}
template <typename T>
Dual<T> pow(const Dual<T>& x, int n) {
    Dual<T> r(1.0);
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

inline bool isfinite_all(double x) { return std::isfinite(x); }
template <typename T>
bool isfinite_all(const Dual<T>& x) { return isfinite_all(x.a) && isfinite_all(x.b); }

/// Tangent part one level down.
template <typename T>
const T& tangent(const Dual<T>& x) { return x.b; }

}  // namespace ggred

namespace Eigen {

template <typename T>
struct NumTraits<ggred::Dual<T>> : NumTraits<double> {
    using Real = ggred::Dual<T>;
    using NonInteger = ggred::Dual<T>;
    using Nested = ggred::Dual<T>;
    using Literal = ggred::Dual<T>;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2 * NumTraits<T>::ReadCost,
        AddCost = 2 * NumTraits<T>::AddCost,
        MulCost = 3 * NumTraits<T>::MulCost
    };
    static inline Real epsilon() { return Real(NumTraits<double>::epsilon()); }
    static inline Real dummy_precision() { return Real(1e-12); }
    static inline int digits10() { return NumTraits<double>::digits10(); }
};

template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<ggred::Dual<T>, double, BinaryOp> {
    using ReturnType = ggred::Dual<T>;
};
template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, ggred::Dual<T>, BinaryOp> {
    using ReturnType = ggred::Dual<T>;
};

}  // namespace Eigen
