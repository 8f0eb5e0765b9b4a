#pragma once

#include <cmath>
#include <string>

#include "ggred/chart.hpp"

namespace ggred {

/// Solves A·X = B by LU with partial pivoting on primal values. Works for any
/// scalar type in the dual tower. Throws `Err` when a pivot is numerically zero.
template <typename Err = SingularMetricError, typename T>
MatX<T> lu_solve(MatX<T> a, MatX<T> b, const char* what = "singular matrix") {
    const int n = static_cast<int>(a.rows());
    if (a.cols() != n || b.rows() != n) throw Error("lu_solve: shape mismatch");
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(primal(a(i, j))));
    const double tiny = 1e-13 * std::max(scale, 1e-300);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(primal(a(col, col)));
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(primal(a(r, col)));
            if (v > best) { best = v; piv = r; }
        }
        if (!(best > tiny)) throw Err(what);
        if (piv != col) {
            a.row(col).swap(a.row(piv));
            b.row(col).swap(b.row(piv));
        }
        for (int r = col + 1; r < n; ++r) {
            T f = a(r, col) / a(col, col);
            if (primal(f) == 0.0 && f == T(0.0)) continue;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            for (int c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
        }
    }
    MatX<T> x(n, b.cols());
    for (int c = 0; c < b.cols(); ++c) {
        for (int r = n - 1; r >= 0; --r) {
            T acc = b(r, c);
            for (int k = r + 1; k < n; ++k) acc -= a(r, k) * x(k, c);
            x(r, c) = acc / a(r, r);
        }
    }
    return x;
}

template <typename Err = SingularMetricError, typename T>
MatX<T> inverse(const MatX<T>& a, const char* what = "singular matrix") {
    MatX<T> id = MatX<T>::Identity(a.rows(), a.cols());
    return lu_solve<Err>(a, id, what);
}

template <typename T>
MatX<double> primal_matrix(const MatX<T>& m) {
    MatX<double> out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = primal(m(i, j));
    return out;
}

template <typename T>
VecX<double> primal_vector(const VecX<T>& v) {
    VecX<double> out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = primal(v(i));
    return out;
}

/// Modified Gram–Schmidt in the inner product `metric`, columns processed in
/// input order. Throws RankError if a column collapses.
inline Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& columns, const Eigen::MatrixXd& metric) {
    Eigen::MatrixXd q = columns;
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
        for (Eigen::Index p = 0; p < c; ++p) {
            double proj = q.col(p).dot(metric * q.col(c));
            q.col(c) -= proj * q.col(p);
        }
        double nrm2 = q.col(c).dot(metric * q.col(c));
        if (!(nrm2 > 1e-24)) throw RankError("Gram-Schmidt: dependent columns");
        q.col(c) /= std::sqrt(nrm2);
    }
    return q;
}

}  // namespace ggred
