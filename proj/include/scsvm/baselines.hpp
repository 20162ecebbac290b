#ifndef SCSVM_BASELINES_HPP_
#define SCSVM_BASELINES_HPP_

#include <random>

#include "scsvm/solver.hpp"

namespace scsvm {

/// Kernelized Pegasos state. counts[j] is the number of times row j was
/// sampled while violating the margin; the implicit classifier is
/// (1 / (lambda t)) * sum_j counts[j] w_j K(z_j, .).
struct PegasosState {
    Eigen::VectorXi counts;
    long t = 1;
    double lambda = 1.0;
};

PegasosState pegasos_init(index_t m, double lambda = 1.0);

/// One Pegasos step: sample a row uniformly, increment its count iff it
/// violates the margin under the current classifier, advance t.
/// Returns whether an update happened.
bool pegasos_step(PegasosState& state, const Dataset& data, const KernelFn& kernel,
                  std::mt19937_64& gen);

/// Coefficients in the representer form of Eq.-style objectives:
/// alpha_j = counts_j * w_j / (lambda * t).
Eigen::VectorXd pegasos_as_alpha(const PegasosState& state, const Dataset& data);

struct PegasosRunConfig {
    double lambda = 1.0;
    double gamma_rbf = -1.0; // <= 0: variance heuristic
    long max_steps = 100000;
    double budget_s = 300.0;
    BudgetMode budget_mode = BudgetMode::wall_clock;
    std::uint64_t seed = 1;
    long log_stride = 1000; // full-objective logging cadence, in steps
};

struct PegasosRun {
    Eigen::VectorXd alpha;        // over all training rows
    std::vector<index_t> support; // rows with nonzero counts
    std::vector<TrajectoryRecord> trajectory;
    long steps = 0;
    double elapsed_ms = 0.0;
    double final_f_full = 0.0;
};

PegasosRun pegasos_run(const Dataset& data, const PegasosRunConfig& rc);

/// Wolfe's conjugate subgradient method on the full SAA: the solver loop with
/// sampling disabled (S_k = the whole training set, validation estimate
/// coincides with the sampled objective). Refuses when the training set
/// exceeds the kernel cap.
SolveResult wolfe_deterministic(const Dataset& data, const SolverConfig& cfg);

} // namespace scsvm

#endif
