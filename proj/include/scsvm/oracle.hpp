#ifndef SCSVM_ORACLE_HPP_
#define SCSVM_ORACLE_HPP_

#include <functional>
#include <string>

#include "scsvm/dataset.hpp"

namespace scsvm {

/// Exact description of the full-SAA subdifferential at a point:
/// ∂f = { base + Σ c_i · gen_i : c_i ∈ [0, 1] }. Generators carry the 1/m
/// hinge averaging; each corresponds to one margin sitting on the kink.
struct SubdifferentialSpec {
    Eigen::VectorXd base;
    std::vector<Eigen::VectorXd> generators;
};

/// Builds the spec for the full-sample objective restricted to the active
/// rows. Margins within kink_tol of 1 become generators.
SubdifferentialSpec subdifferential_at(const Dataset& data, const std::vector<index_t>& active,
                                       const Eigen::VectorXd& alpha, double gamma,
                                       double kink_tol = 1e-9);

struct MinNormResult {
    Eigen::VectorXd d_star; // negated minimum-norm subgradient
    double norm = 0.0;
    Eigen::VectorXd c; // box coefficients of the minimizer
    long sweeps = 0;
};

/// Minimum-norm element of the subdifferential via exact projected
/// coordinate descent over the box. At most 30 generators (desk scale).
MinNormResult min_norm_subgradient(const SubdifferentialSpec& spec, double tol);

struct CertificateReport {
    double d_norm = 0.0;
    double threshold = 0.0; // 4 eps + eps_prime
    bool pass = false;
    index_t kink_count = 0;
    Eigen::VectorXd d_star;

    std::string text() const;
};

/// Optimality certificate: the minimum-norm subgradient of the full SAA at
/// alpha must fall below 4 eps + eps_prime.
CertificateReport certify_optimality(const Dataset& data, const std::vector<index_t>& active,
                                     const Eigen::VectorXd& alpha, double gamma, double eps,
                                     double eps_prime);

struct DenseSolveOptions {
    double c = 0.5;         // step scale; step_k = c / sqrt(k)
    long max_iters = 200000;
    long window = 1000;     // stabilization check cadence
};

struct DenseSolveResult {
    Eigen::VectorXd alpha; // best iterate, over all rows
    double value = 0.0;    // full-SAA objective at alpha
    long iters = 0;
    double achieved_tol = 0.0; // best-value improvement over the last window
    bool stabilized = false;
};

/// Independent ground-truth solver for small instances (m <= 300):
/// diminishing-step subgradient method on the full SAA with best-iterate
/// tracking. Runs until the best value improves by less than tol per window
/// or the budget is exhausted (tol = inf always exhausts the budget).
DenseSolveResult dense_reference_solve(const Dataset& data, double gamma, double tol,
                                       const DenseSolveOptions& opts = {});

/// One-sided finite-difference directional derivative (f nonsmooth, so the
/// right derivative is the meaningful limit).
double fd_directional_derivative(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& dir, double h);

} // namespace scsvm

#endif
