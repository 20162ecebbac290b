#ifndef SCSVM_KERNEL_HPP_
#define SCSVM_KERNEL_HPP_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scsvm/dataset.hpp"

namespace scsvm {

/// exp(-gamma * ||x - y||^2). Value in (0, 1], exactly 1 iff x == y.
double rbf(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double gamma);

/// Scalar kernel signature for pluggable-kernel call sites (Pegasos).
using KernelFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

/// 1 / (p * var(features)), the usual bandwidth heuristic; 1/p when the
/// pooled variance vanishes.
double default_rbf_gamma(const FeatureMatrix& train_features);

/// Gram matrix over the active sample rows, grown append-only as sampling
/// proceeds. Mutation (extend) is single-owner; reads between mutations are
/// thread-safe.
class GrowingKernel {
public:
    GrowingKernel(double gamma, index_t max_active = 20000);

    /// Appends rows/columns for new dataset rows. Existing entries are never
    /// recomputed. Throws ConfigError on duplicates or when the cap would be
    /// exceeded.
    void extend(const std::vector<index_t>& new_rows, const Dataset& data);

    /// Kernel block K(query_j, active_i), one row per query row.
    Eigen::MatrixXd cross_rows(const std::vector<index_t>& query_rows, const Dataset& data) const;

    const Eigen::MatrixXd& gram() const { return gram_; }
    const std::vector<index_t>& active_rows() const { return active_; }
    double gamma() const { return gamma_; }
    index_t size() const { return gram_.rows(); }
    index_t max_active() const { return max_active_; }

    /// Debug dump: int64 dimension, double gamma, then row-major doubles.
    /// All fields little-endian.
    void dump(const std::string& path) const;
    static Eigen::MatrixXd load_dump(const std::string& path, double* gamma_out = nullptr);

private:
    double gamma_;
    index_t max_active_;
    std::vector<index_t> active_;
    Eigen::MatrixXd gram_;
};

} // namespace scsvm

#endif
