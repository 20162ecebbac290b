#ifndef SCSVM_DIRECTION_HPP_
#define SCSVM_DIRECTION_HPP_

#include <Eigen/Dense>

#include "scsvm/dataset.hpp"

namespace scsvm {

struct DirectionStep {
    Eigen::VectorXd d;
    double lambda = 0.0; // weight on -d_prev in the minimizing combination
};

/// Direction of descent from the two-element bundle {-d_prev, g}:
/// minimize ||lambda * (-d_prev) + (1 - lambda) * g||^2 over lambda in [0, 1]
/// and return the negated minimizer. A degenerate bundle (-d_prev == g)
/// resolves to lambda = 0, i.e. d = -g. ||d|| never exceeds
/// min(||d_prev||, ||g||).
DirectionStep min_norm_direction(const Eigen::VectorXd& d_prev, const Eigen::VectorXd& g);

/// v extended with trailing zeros; size must not shrink.
Eigen::VectorXd pad(const Eigen::VectorXd& v, index_t size);

} // namespace scsvm

#endif
