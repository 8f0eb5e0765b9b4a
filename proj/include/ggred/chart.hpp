#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ggred/dual.hpp"
#include "ggred/errors.hpp"

namespace ggred {

template <typename T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Axis-aligned coordinate box.
class Chart {
public:
    Chart(std::string name, Eigen::VectorXd lower, Eigen::VectorXd upper);

    int dim() const { return static_cast<int>(lower_.size()); }
    const std::string& name() const { return name_; }
    const Eigen::VectorXd& lower() const { return lower_; }
    const Eigen::VectorXd& upper() const { return upper_; }

    bool contains(const Eigen::VectorXd& x) const;
    /// Strict interior test after shrinking every axis by `margin` of its length.
    bool contains_interior(const Eigen::VectorXd& x, double margin) const;
    /// Throws DomainError unless x lies strictly inside.
    void require_inside(const Eigen::VectorXd& x) const;

    /// Seeded uniform draws inside the box shrunk by `margin` of each axis length.
    std::vector<Eigen::VectorXd> sample(std::size_t count, std::mt19937_64& rng,
                                        double margin = 1e-3) const;

private:
    std::string name_;
    Eigen::VectorXd lower_, upper_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(std::string name, Eigen::VectorXd lower, Eigen::VectorXd upper) {
    return std::make_shared<const Chart>(std::move(name), std::move(lower), std::move(upper));
}

/// Slot counts of a component array. Components are stored flattened in
/// row-major order, covariant slots first.
struct Valence {
    int covariant = 0;
    int contravariant = 0;
    bool antisymmetric = false;

    int rank() const { return covariant + contravariant; }

    static Valence scalar() { return {0, 0, false}; }
    static Valence vector() { return {0, 1, false}; }
    static Valence covector() { return {1, 0, true}; }
    static Valence form(int k) { return {k, 0, true}; }
    static Valence bilinear() { return {2, 0, false}; }
    static Valence endomorphism() { return {1, 1, false}; }
};

/// A tensor-valued function of chart coordinates. The evaluator is stored for
/// plain doubles and for up to `MaxDepth` nested dual levels, so derivatives of
/// any order up to that depth are exact.
class ChartField {
public:
    template <typename T>
    using Eval = std::function<VecX<T>(const VecX<T>&)>;

    ChartField() = default;

    template <int MaxDepth = 3, typename F>
    static ChartField make(ChartPtr chart, Valence valence, F&& f) {
        static_assert(MaxDepth >= 0 && MaxDepth <= 3);
        ChartField out;
        out.chart_ = std::move(chart);
        out.valence_ = valence;
        out.depth_ = MaxDepth;
        out.f0_ = f;
        if constexpr (MaxDepth >= 1) out.f1_ = f;
        if constexpr (MaxDepth >= 2) out.f2_ = f;
        if constexpr (MaxDepth >= 3) out.f3_ = f;
        return out;
    }

    const Chart& chart() const { return *chart_; }
    const ChartPtr& chart_ptr() const { return chart_; }
    int dim() const { return chart_->dim(); }
    const Valence& valence() const { return valence_; }
    int max_depth() const { return depth_; }
    /// Number of components, dim^rank.
    int size() const;

    template <typename T>
    VecX<T> operator()(const VecX<T>& x) const {
        constexpr int depth = dual_depth<T>::value;
        static_assert(depth <= 3, "at most three nested dual levels are supported");
        if (depth > depth_)
            throw EvaluationError("field evaluated beyond its differentiability depth");
        if constexpr (depth == 0) return f0_(x);
        else if constexpr (depth == 1) return f1_(x);
        else if constexpr (depth == 2) return f2_(x);
        else return f3_(x);
    }

private:
    ChartPtr chart_;
    Valence valence_;
    int depth_ = 0;
    Eval<double> f0_;
    Eval<D1> f1_;
    Eval<D2> f2_;
    Eval<D3> f3_;
};

/// Row-major unflattening helpers.
template <typename T>
MatX<T> as_matrix(const VecX<T>& flat, int n) {
    MatX<T> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = flat(i * n + j);
    return m;
}

template <typename T>
VecX<T> flatten(const MatX<T>& m) {
    const int n = static_cast<int>(m.rows());
    VecX<T> v(n * m.cols());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
    return v;
}

template <typename T>
VecX<T> cast_vec(const Eigen::VectorXd& x) {
    VecX<T> out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = T(x(i));
    return out;
}

}  // namespace ggred
