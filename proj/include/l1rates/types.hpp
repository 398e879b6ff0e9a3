#pragma once

#include <Eigen/Dense>

namespace l1rates {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

template <typename Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& v) {
    return v.template lpNorm<1>();
}

template <typename Derived>
double sup_norm(const Eigen::MatrixBase<Derived>& v) {
    return v.size() == 0 ? 0.0 : v.template lpNorm<Eigen::Infinity>();
}

}  // namespace l1rates
