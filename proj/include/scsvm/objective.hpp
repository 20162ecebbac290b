#ifndef SCSVM_OBJECTIVE_HPP_
#define SCSVM_OBJECTIVE_HPP_

#include <Eigen/Dense>

#include "scsvm/kernel.hpp"

namespace scsvm {

/// Objective value with its quadratic/hinge decomposition. The parts sum to
/// value in the exact accumulation order used to produce it.
struct ObjectiveValue {
    double value = 0.0;
    double quadratic = 0.0;
    double hinge = 0.0;
};

/// Minimal convex-objective surface shared by the line search, the direction
/// finder and the reference solvers.
class ConvexObjective {
public:
    virtual ~ConvexObjective() = default;
    virtual index_t dim() const = 0;
    virtual double value(const Eigen::VectorXd& alpha) const = 0;
    virtual Eigen::VectorXd subgradient(const Eigen::VectorXd& alpha) const = 0;
};

/// Sampled SVM objective over the kernel's active rows:
///   0.5 <alpha, Q alpha> + mean_i max{0, 1 - w_i <alpha, Q_i>}.
/// Holds references; the kernel must outlive the objective and not grow
/// while it is in use.
class SampledObjective : public ConvexObjective {
public:
    SampledObjective(const GrowingKernel& kernel, Eigen::VectorXd labels);

    index_t dim() const override { return labels_.size(); }
    ObjectiveValue eval(const Eigen::VectorXd& alpha) const;
    double value(const Eigen::VectorXd& alpha) const override { return eval(alpha).value; }

    /// Q alpha + mean over {i : margin_i < 1} of (-w_i Q_i). Terms sitting
    /// exactly on the kink (margin == 1) contribute 0, which keeps the
    /// subgradient a deterministic function of alpha.
    Eigen::VectorXd subgradient(const Eigen::VectorXd& alpha) const override;

    /// margin_i = w_i <alpha, Q_i>.
    Eigen::VectorXd margins(const Eigen::VectorXd& alpha) const;

    const GrowingKernel& kernel() const { return kernel_; }
    const Eigen::VectorXd& labels() const { return labels_; }

private:
    void check_alpha(const Eigen::VectorXd& alpha) const;

    const GrowingKernel& kernel_;
    Eigen::VectorXd labels_;
};

/// Independent estimate on a validation draw: the quadratic term is the
/// classifier norm 0.5 <alpha, Q alpha> over the sample rows, the hinge terms
/// run over the validation rows through the cross-kernel block.
ObjectiveValue eval_validation(const SampledObjective& obj, const Eigen::MatrixXd& cross,
                               const Eigen::VectorXd& labels_t, const Eigen::VectorXd& alpha);

/// Full-sample objective with the classifier restricted to the active rows:
/// quadratic on the active Gram block, hinge averaged over all rows of data.
ObjectiveValue eval_full(const Dataset& data, const std::vector<index_t>& active,
                         const Eigen::VectorXd& alpha, double gamma);
ObjectiveValue eval_full(const Dataset& data, const GrowingKernel& kernel,
                         const Eigen::VectorXd& alpha);

/// Diagnostic for the |margin| <= M assumption; never fatal.
index_t count_margin_bound_violations(const Eigen::VectorXd& margins, double bound);

} // namespace scsvm

#endif
