#ifndef SCSVM_EXPERIMENT_HPP_
#define SCSVM_EXPERIMENT_HPP_

#include <string>
#include <vector>

#include "scsvm/baselines.hpp"
#include "scsvm/dataset.hpp"
#include "scsvm/solver.hpp"

namespace scsvm {

/// Persisted classifier: sign(sum_i alpha_i K(v_i, standardize(x))). The
/// support vectors are stored already standardized.
struct Model {
    double gamma = 0.0;
    Standardizer scaler;
    FeatureMatrix active_features;
    Eigen::VectorXd alpha;
};

Model make_model(double gamma, const Standardizer& scaler, const Dataset& std_train,
                 const std::vector<index_t>& active, const Eigen::VectorXd& alpha);
double decision_value(const Model& model, const Eigen::VectorXd& raw_features);
double accuracy(const Model& model, const Dataset& raw_test);
void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

struct ExperimentSpec {
    std::string dataset_path; // empty: use the synthetic generator
    LoadOptions load;
    std::string synthetic_kind = "blobs";
    index_t synthetic_m = 2000;
    double synthetic_noise = 0.5;
    std::uint64_t synthetic_seed = 1;

    std::string algo = "scs"; // scs | pegasos | wolfe
    SolverConfig solver;
    double pegasos_lambda = 1.0;
    long pegasos_max_steps = 1000000;
    long pegasos_log_stride = 1000;

    std::vector<std::uint64_t> seeds = {1};
    double test_fraction = 0.2;
    std::string out_dir = ".";

    void validate() const;
};

/// Flat key=value file ('#' comments); keys match the CLI flag names.
ExperimentSpec parse_experiment_file(const std::string& path);
void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value);
std::vector<std::uint64_t> parse_seed_list(const std::string& value);
/// Inverse of parse: every emitted line round-trips through apply_override.
std::string spec_to_text(const ExperimentSpec& spec);

struct SeedOutcome {
    std::uint64_t seed = 0;
    bool feasible = true; // false: full-SAA refused (reported as N/A)
    double accuracy = 0.0;
    double final_f_full = 0.0;
    double elapsed_ms = 0.0;
    long iterations = 0;
    std::string trajectory_path;
    std::string model_path;
    std::string note;
};

struct ExperimentSummary {
    std::string algo;
    std::vector<SeedOutcome> per_seed;
    index_t feasible_runs = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    double mean_final_f = 0.0;
    double std_final_f = 0.0;
    double mean_elapsed_ms = 0.0;

    std::string text() const;
};

/// Multi-seed experiment: per-seed split/standardize/train, per-seed
/// trajectory and model files, accuracy recomputed from the persisted model.
/// Seeds fan out across worker threads.
ExperimentSummary run(const ExperimentSpec& spec);

struct NamedTrajectory {
    std::string name;
    std::vector<TrajectoryRecord> records;
};

/// First-50 / last-50 objective table, one iteration/objective column pair
/// per trajectory, clamped for short runs. Objective is the full-sample
/// column when recorded on that row, the sampled one otherwise.
std::string compare_report(const std::vector<NamedTrajectory>& trajectories);

} // namespace scsvm

#endif
