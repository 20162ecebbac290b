#include "scsvm/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "scsvm/errors.hpp"
#include "scsvm/objective.hpp"
#include "scsvm/rng.hpp"

namespace scsvm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<index_t> support_of(const PegasosState& state) {
    std::vector<index_t> support;
    for (index_t j = 0; j < state.counts.size(); ++j) {
        if (state.counts[j] != 0)
            support.push_back(j);
    }
    return support;
}

double full_objective(const PegasosState& state, const Dataset& data, double gamma) {
    const std::vector<index_t> support = support_of(state);
    if (support.empty())
        return 1.0; // alpha = 0: zero quadratic, every hinge term is 1
    const Eigen::VectorXd alpha = pegasos_as_alpha(state, data);
    Eigen::VectorXd alpha_sub(static_cast<index_t>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i)
        alpha_sub[static_cast<index_t>(i)] = alpha[support[i]];
    return eval_full(data, support, alpha_sub, gamma).value;
}

} // namespace

PegasosState pegasos_init(index_t m, double lambda) {
    if (m < 1)
        throw DataError("pegasos: empty training set");
    if (!(lambda > 0.0))
        throw ConfigError("pegasos: lambda must be positive");
    PegasosState st;
    st.counts = Eigen::VectorXi::Zero(m);
    st.t = 1;
    st.lambda = lambda;
    return st;
}

bool pegasos_step(PegasosState& state, const Dataset& data, const KernelFn& kernel,
                  std::mt19937_64& gen) {
    if (state.t < 1)
        throw ConfigError("pegasos: iteration counter must be at least 1");
    if (state.counts.size() != data.rows())
        throw ConfigError("pegasos: state/dataset size mismatch");

    const index_t i = static_cast<index_t>(
        rng::uniform_index(gen, static_cast<std::uint64_t>(data.rows())));
    double score = 0.0;
    for (index_t j = 0; j < state.counts.size(); ++j) {
        if (state.counts[j] != 0)
            score += state.counts[j] * data.labels[j] *
                     kernel(data.features.row(j), data.features.row(i));
    }
    const double margin =
        data.labels[i] * score / (state.lambda * static_cast<double>(state.t));
    const bool update = margin < 1.0;
    if (update)
        state.counts[i] += 1;
    state.t += 1;
    return update;
}

Eigen::VectorXd pegasos_as_alpha(const PegasosState& state, const Dataset& data) {
    if (state.t < 1)
        throw ConfigError("pegasos: iteration counter must be at least 1");
    if (state.counts.size() != data.rows())
        throw ConfigError("pegasos: state/dataset size mismatch");
    const double scale = 1.0 / (state.lambda * static_cast<double>(state.t));
    Eigen::VectorXd alpha(state.counts.size());
    for (index_t j = 0; j < state.counts.size(); ++j)
        alpha[j] = state.counts[j] * data.labels[j] * scale;
    return alpha;
}

PegasosRun pegasos_run(const Dataset& data, const PegasosRunConfig& rc) {
    if (rc.max_steps < 0)
        throw ConfigError("pegasos: max_steps must be nonnegative");
    if (!(rc.budget_s > 0.0))
        throw ConfigError("pegasos: budget_s must be positive");
    if (rc.log_stride < 1)
        throw ConfigError("pegasos: log_stride must be positive");
    const double gamma = rc.gamma_rbf > 0.0 ? rc.gamma_rbf : default_rbf_gamma(data.features);
    const KernelFn kernel = [gamma](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return rbf(a, b, gamma);
    };

    PegasosState st = pegasos_init(data.rows(), rc.lambda);
    std::mt19937_64 gen(rng::derive_seed(rc.seed, 0x9e6aULL));
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    PegasosRun run;
    auto log_record = [&](long step, bool updated) {
        TrajectoryRecord rec;
        rec.iteration = step;
        rec.sample_size = static_cast<index_t>(support_of(st).size());
        rec.f_sampled = kNaN;
        rec.f_full = full_objective(st, data, gamma);
        rec.dir_norm = kNaN;
        rec.delta = kNaN;
        rec.step = 1.0 / (st.lambda * static_cast<double>(st.t));
        rec.accepted = updated;
        rec.vacuous_accept = false;
        rec.elapsed_ms = rc.budget_mode == BudgetMode::steps ? 0.0 : elapsed_ms();
        run.trajectory.push_back(rec);
    };

    long step_count = 0;
    bool updated = false;
    while (step_count < rc.max_steps) {
        if (rc.budget_mode == BudgetMode::wall_clock && elapsed_ms() > rc.budget_s * 1000.0)
            break;
        updated = pegasos_step(st, data, kernel, gen);
        ++step_count;
        if (step_count % rc.log_stride == 0)
            log_record(step_count, updated);
    }
    if (run.trajectory.empty() || run.trajectory.back().iteration != step_count)
        log_record(step_count, updated);

    run.alpha = pegasos_as_alpha(st, data);
    run.support = support_of(st);
    run.steps = step_count;
    run.elapsed_ms = elapsed_ms();
    run.final_f_full = run.trajectory.back().f_full;
    return run;
}

SolveResult wolfe_deterministic(const Dataset& data, const SolverConfig& cfg) {
    SolverConfig full = cfg;
    full.full_sample = true;
    return solve(full, data);
}

} // namespace scsvm
