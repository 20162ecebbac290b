#ifndef SCSVM_SOLVER_HPP_
#define SCSVM_SOLVER_HPP_

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scsvm/dataset.hpp"
#include "scsvm/kernel.hpp"

namespace scsvm {

enum class GrowthPolicy { geometric, theory };
enum class BudgetMode { wall_clock, steps };

struct SolverConfig {
    double epsilon = 1e-3;   // termination threshold on ||d_k||
    double delta0 = 0.5;
    double delta_min = 1e-3;
    double delta_max = 16.0;
    bool auto_delta_max = false; // delta_max = epsilon / zeta instead of the field above
    double eta1 = 0.25;
    // Keep eta2 * delta_min = epsilon when overriding any of the three.
    // Smaller products leave a band of directions that keep re-growing delta
    // so the loop never meets both exit conditions; larger products freeze
    // acceptance before ||d|| can reach epsilon. eta2 also caps the accepted
    // step length at delta < ||d|| / eta2, so large values throttle progress.
    double eta2 = 1.0;
    double gamma_tr = 1.5; // trust-region factor, > 1
    double kappa = 10.0;
    double big_m = 1.0;

    // line search
    int n = 4;
    double m1 = 0.3;
    double m2 = 0.26;
    int max_bisections = 60;

    index_t initial_sample = 32;
    GrowthPolicy growth = GrowthPolicy::geometric;
    double growth_rho = 0.1; // geometric: |s_k| = max(1, ceil(rho * |S_{k-1}|))

    long max_iters = 10000;
    double budget_s = 300.0;
    BudgetMode budget_mode = BudgetMode::wall_clock; // steps: iteration cap only, elapsed logged as 0

    std::uint64_t seed = 1;
    double gamma_rbf = -1.0; // <= 0: variance heuristic from the training features
    index_t kernel_cap = 20000;
    long log_stride = 10; // full-objective logging cadence

    bool validation_literal = false; // quadratic of the validation estimate on T's own Gram
    bool full_sample = false;        // S_k = whole training set, T_k = S_k (deterministic mode)
    double c1_override = -1.0;       // <= 0: C1 = m1 / (2n)

    void validate(index_t pool_size) const;
    double c1() const;
    double zeta() const;
    double resolved_delta_max() const;
};

/// Smallest sample size for which the sampled objective is a kappa-
/// approximation with probability at least 1 - epsilon on a delta-ball:
/// ceil(-8 ln(epsilon/2) (M+1)^2 / (kappa^2 delta^4)).
long long min_sample_size(double epsilon, double kappa, double delta, double big_m);

struct TrajectoryRecord {
    long iteration = 0;
    index_t sample_size = 0;
    double f_sampled = 0.0; // NaN = not recorded (written as an empty field)
    double f_full = 0.0;    // NaN = not recorded on this stride
    double dir_norm = 0.0;
    double delta = 0.0;
    double step = 0.0;
    bool accepted = false;
    bool vacuous_accept = false; // accepted although the validation difference was positive
    double elapsed_ms = 0.0;
};

void write_trajectory(const std::string& path, const std::vector<TrajectoryRecord>& records);
std::vector<TrajectoryRecord> read_trajectory(const std::string& path);

/// Shortest round-trip decimal form (%.17g); NaN renders as an empty field.
std::string csv_number(double v);

struct SolverState {
    Eigen::VectorXd incumbent;      // alpha-hat over the active sample
    Eigen::VectorXd prev_direction; // d_{k-1}, same dimension
    double delta = 0.0;
    GrowingKernel kernel;
    Eigen::VectorXd labels; // labels of the active rows, kept in sync with kernel
    SampleStream sample_stream;
    SampleStream validation_stream; // reseeded every iteration, independent of S_k
    long iteration = 0;
    std::vector<TrajectoryRecord> trajectory;
    double last_dir_norm = 0.0;
    bool sampling_exhausted = false; // pool/cap reached; running fixed-sample
    // Objective data at the incumbent, carried over while the kernel is not
    // growing (the objective only changes through growth). Owned by step().
    Eigen::VectorXd cached_subgradient;
    double cached_value = 0.0;
    bool cache_valid = false;
    std::uint64_t seed = 0;
    std::chrono::steady_clock::time_point start_time;
};

enum class StopReason { converged, max_iters, wall_clock };

struct SolveResult {
    Eigen::VectorXd alpha;
    std::vector<index_t> active;
    std::vector<TrajectoryRecord> trajectory;
    StopReason stop = StopReason::max_iters;
    long iterations = 0;
    double elapsed_ms = 0.0;
    double final_dir_norm = 0.0;
    double final_delta = 0.0;
    double final_f_full = 0.0;
    bool sampling_exhausted = false;
};

SolverState init_state(const SolverConfig& cfg, const Dataset& data);

/// One pass of the main loop: subgradient at the incumbent, conjugate
/// direction, line search under the current radius, sample growth, incumbent
/// acceptance against the independent estimate, radius update, record.
void step(SolverState& state, const SolverConfig& cfg, const Dataset& data);

SolveResult solve(const SolverConfig& cfg, const Dataset& data);

} // namespace scsvm

#endif
