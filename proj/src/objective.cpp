#include "scsvm/objective.hpp"

#include <cmath>
#include <numeric>

#include "scsvm/errors.hpp"

namespace scsvm {

SampledObjective::SampledObjective(const GrowingKernel& kernel, Eigen::VectorXd labels)
    : kernel_(kernel), labels_(std::move(labels)) {
    if (labels_.size() != kernel_.size())
        throw ConfigError("objective: labels/kernel size mismatch");
    for (index_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] != 1.0 && labels_[i] != -1.0)
            throw ConfigError("objective: labels must be +/-1");
    }
}

void SampledObjective::check_alpha(const Eigen::VectorXd& alpha) const {
    if (alpha.size() != labels_.size())
        throw ConfigError("objective: alpha has dimension " + std::to_string(alpha.size()) +
                          ", expected " + std::to_string(labels_.size()));
    if (!alpha.allFinite())
        throw ConfigError("objective: alpha has a non-finite entry");
}

ObjectiveValue SampledObjective::eval(const Eigen::VectorXd& alpha) const {
    check_alpha(alpha);
    const Eigen::VectorXd qa = kernel_.gram() * alpha;
    ObjectiveValue out;
    out.quadratic = 0.5 * alpha.dot(qa);
    const index_t n = labels_.size();
    double hinge_sum = 0.0;
    for (index_t i = 0; i < n; ++i)
        hinge_sum += std::max(0.0, 1.0 - labels_[i] * qa[i]);
    out.hinge = hinge_sum / static_cast<double>(n);
    out.value = out.quadratic + out.hinge;
    return out;
}

Eigen::VectorXd SampledObjective::margins(const Eigen::VectorXd& alpha) const {
    check_alpha(alpha);
    const Eigen::VectorXd qa = kernel_.gram() * alpha;
    return labels_.cwiseProduct(qa);
}

Eigen::VectorXd SampledObjective::subgradient(const Eigen::VectorXd& alpha) const {
    check_alpha(alpha);
    const index_t n = labels_.size();
    const Eigen::VectorXd qa = kernel_.gram() * alpha;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(n);
    for (index_t i = 0; i < n; ++i) {
        if (labels_[i] * qa[i] < 1.0)
            coef[i] = -labels_[i] / static_cast<double>(n);
    }
    return qa + kernel_.gram() * coef;
}

ObjectiveValue eval_validation(const SampledObjective& obj, const Eigen::MatrixXd& cross,
                               const Eigen::VectorXd& labels_t, const Eigen::VectorXd& alpha) {
    if (cross.cols() != obj.dim())
        throw ConfigError("eval_validation: cross block has wrong column count");
    if (cross.rows() != labels_t.size())
        throw ConfigError("eval_validation: cross block/labels size mismatch");
    if (alpha.size() != obj.dim())
        throw ConfigError("eval_validation: alpha dimension mismatch");

    ObjectiveValue out;
    out.quadratic = 0.5 * alpha.dot(obj.kernel().gram() * alpha);
    const index_t nt = labels_t.size();
    double hinge_sum = 0.0;
    for (index_t j = 0; j < nt; ++j)
        hinge_sum += std::max(0.0, 1.0 - labels_t[j] * cross.row(j).dot(alpha));
    out.hinge = nt > 0 ? hinge_sum / static_cast<double>(nt) : 0.0;
    out.value = out.quadratic + out.hinge;
    return out;
}

ObjectiveValue eval_full(const Dataset& data, const GrowingKernel& kernel,
                         const Eigen::VectorXd& alpha) {
    if (alpha.size() != kernel.size())
        throw ConfigError("eval_full: alpha dimension mismatch");
    ObjectiveValue out;
    out.quadratic = 0.5 * alpha.dot(kernel.gram() * alpha);

    const index_t m = data.rows();
    const index_t chunk = 2048;
    double hinge_sum = 0.0;
    std::vector<index_t> rows;
    for (index_t base = 0; base < m; base += chunk) {
        const index_t stop = std::min(m, base + chunk);
        rows.resize(static_cast<std::size_t>(stop - base));
        std::iota(rows.begin(), rows.end(), base);
        const Eigen::MatrixXd cross = kernel.cross_rows(rows, data);
        for (index_t j = 0; j < cross.rows(); ++j)
            hinge_sum += std::max(0.0, 1.0 - data.labels[base + j] * cross.row(j).dot(alpha));
    }
    out.hinge = m > 0 ? hinge_sum / static_cast<double>(m) : 0.0;
    out.value = out.quadratic + out.hinge;
    return out;
}

ObjectiveValue eval_full(const Dataset& data, const std::vector<index_t>& active,
                         const Eigen::VectorXd& alpha, double gamma) {
    GrowingKernel kernel(gamma, std::max<index_t>(static_cast<index_t>(active.size()), 1));
    kernel.extend(active, data);
    return eval_full(data, kernel, alpha);
}

index_t count_margin_bound_violations(const Eigen::VectorXd& margins, double bound) {
    index_t n = 0;
    for (index_t i = 0; i < margins.size(); ++i) {
        if (std::abs(margins[i]) > bound) ++n;
    }
    return n;
}

} // namespace scsvm
