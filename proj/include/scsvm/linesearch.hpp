#ifndef SCSVM_LINESEARCH_HPP_
#define SCSVM_LINESEARCH_HPP_

#include <Eigen/Dense>

#include "scsvm/objective.hpp"

namespace scsvm {

struct LineSearchParams {
    double m1 = 0.3;
    double m2 = 0.26;
    int n = 4;
    double delta = 1.0;
    int max_bisections = 60;

    /// Enforces 1/4 <= m2 < m1 < 1/2, n > 1, delta > 0.
    void validate() const;
    double b() const { return delta / n; }
};

/// Classification of a trial step against the strong-Wolfe sets:
///   L = { t > 0 : f(a + t d) - f(a) <= -m1 ||d||^2 t }
///   R = { t > 0 : 0 > <g(a + t d), d> >= -m2 ||d||^2 }
struct StepQuery {
    double t = 0.0;
    bool in_l = false;
    bool in_r = false;
    double f_delta = 0.0;
    double dir_deriv = 0.0;
};

enum class SearchExit {
    interior,      // t in L and R with t||d|| in [b, delta]
    boundary_half, // doubling overshot delta; returned previous (in-L) step
    collapse,      // halving fell below b without entering L; t = 0
    cap_fallback,  // bisection cap hit; best in-L step returned
};

struct LineSearchResult {
    double t = 0.0;
    SearchExit exit = SearchExit::collapse;
    int evals = 0;                // objective evaluations (value + subgradient pairs)
    bool initial_neither = false; // initial trial fell outside L and R
    double witness_t = 0.0;       // on collapse: the step with witness_t * ||d|| < b not in L
    double f_base = 0.0;          // objective at alpha_hat
    double f_step = 0.0;          // objective at alpha_hat + t d (= f_base when t = 0)
};

StepQuery classify(const SampledObjective& obj, const Eigen::VectorXd& alpha_hat,
                   const Eigen::VectorXd& d, double t, const LineSearchParams& p);

/// Step-size search along d from alpha_hat. Every positive return satisfies
/// the L inequality with t * ||d|| <= delta; t = 0 is returned only after a
/// trial below b = delta/n failed the L test. The initial trial is
/// delta / (2 ||d||), the midpoint of the admissible band. Trials outside
/// both L and R are treated as overlong steps (shrink / keep the left half),
/// which preserves the bracket's left-end-in-L invariant.
LineSearchResult search(const SampledObjective& obj, const Eigen::VectorXd& alpha_hat,
                        const Eigen::VectorXd& d, const LineSearchParams& p);

} // namespace scsvm

#endif
