#pragma once

#include "ggred/chart.hpp"

namespace ggred {

/// Smooth map between coordinate charts, evaluable on the dual tower like a
/// ChartField.
class CoordinateMap {
public:
    CoordinateMap() = default;

    template <int MaxDepth = 3, typename F>
    static CoordinateMap make(ChartPtr domain, int target_dim, F&& f) {
        CoordinateMap m;
        m.field_ = ChartField::make<MaxDepth>(std::move(domain), Valence::scalar(), std::forward<F>(f));
        m.target_dim_ = target_dim;
        return m;
    }

    const Chart& domain() const { return field_.chart(); }
    const ChartPtr& domain_ptr() const { return field_.chart_ptr(); }
    int target_dim() const { return target_dim_; }
    int max_depth() const { return field_.max_depth(); }

    template <typename T>
    VecX<T> operator()(const VecX<T>& x) const {
        return field_(x);
    }

private:
    ChartField field_;
    int target_dim_ = 0;
};

}  // namespace ggred
