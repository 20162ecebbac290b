#include "scsvm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "scsvm/direction.hpp"
#include "scsvm/errors.hpp"
#include "scsvm/linesearch.hpp"
#include "scsvm/objective.hpp"
#include "scsvm/rng.hpp"

namespace scsvm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double elapsed_ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace

double SolverConfig::c1() const { return c1_override > 0.0 ? c1_override : m1 / (2.0 * n); }

double SolverConfig::zeta() const {
    return std::max({4.0 * n * kappa, eta2, 4.0 * kappa / (c1() * (1.0 - eta1))});
}

double SolverConfig::resolved_delta_max() const {
    return auto_delta_max ? epsilon / zeta() : delta_max;
}

void SolverConfig::validate(index_t pool_size) const {
    if (pool_size < 1)
        throw DataError("solver: empty training set");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ConfigError("solver: epsilon must be positive");
    if (!(eta1 > 0.0 && eta1 < 1.0))
        throw ConfigError("solver: eta1 must lie in (0, 1)");
    if (!(eta2 > 0.0))
        throw ConfigError("solver: eta2 must be positive");
    if (!(gamma_tr > 1.0))
        throw ConfigError("solver: gamma (trust factor) must exceed 1");
    if (!(kappa > 0.0) || !(big_m > 0.0))
        throw ConfigError("solver: kappa and big_m must be positive");
    const double dmax = resolved_delta_max();
    if (!(delta_min > 0.0 && delta_min < delta0 && delta0 < dmax))
        throw ConfigError("solver: need 0 < delta_min < delta0 < delta_max (delta_max = " +
                          std::to_string(dmax) + ")");
    LineSearchParams ls{m1, m2, n, delta0, max_bisections};
    ls.validate();
    if (initial_sample < 1)
        throw ConfigError("solver: initial_sample must be positive");
    if (!(growth_rho > 0.0))
        throw ConfigError("solver: growth_rho must be positive");
    if (max_iters < 0)
        throw ConfigError("solver: max_iters must be nonnegative");
    if (!(budget_s > 0.0))
        throw ConfigError("solver: budget_s must be positive");
    if (kernel_cap < 1)
        throw ConfigError("solver: kernel_cap must be positive");
    if (log_stride < 1)
        throw ConfigError("solver: log_stride must be positive");
    if (full_sample && pool_size > kernel_cap)
        throw ConfigError("full-SAA infeasible: training size " + std::to_string(pool_size) +
                          " exceeds kernel cap " + std::to_string(kernel_cap));
}

long long min_sample_size(double epsilon, double kappa, double delta, double big_m) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("min_sample_size: epsilon must lie in (0, 1)");
    if (!(kappa > 0.0) || !(delta > 0.0) || !(big_m > 0.0))
        throw ConfigError("min_sample_size: kappa, delta and big_m must be positive");
    const double raw = -8.0 * std::log(epsilon / 2.0) * (big_m + 1.0) * (big_m + 1.0) /
                       (kappa * kappa * delta * delta * delta * delta);
    if (!(raw < 9.0e18))
        return std::numeric_limits<long long>::max();
    return static_cast<long long>(std::ceil(raw));
}

std::string csv_number(double v) {
    if (std::isnan(v))
        return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

const char kTrajectoryHeader[] =
    "iteration,sample_size,f_sampled,f_full,dir_norm,delta,step,accepted,vacuous_accept,"
    "elapsed_ms";

double parse_field(const std::string& s, const std::string& path) {
    if (s.empty())
        return kNaN;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size())
        throw DataError(path + ": malformed numeric field '" + s + "'");
    return v;
}

} // namespace

void write_trajectory(const std::string& path, const std::vector<TrajectoryRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open trajectory file for writing: " + path);
    out << kTrajectoryHeader << '\n';
    for (const auto& r : records) {
        out << r.iteration << ',' << r.sample_size << ',' << csv_number(r.f_sampled) << ','
            << csv_number(r.f_full) << ',' << csv_number(r.dir_norm) << ',' << csv_number(r.delta)
            << ',' << csv_number(r.step) << ',' << (r.accepted ? 1 : 0) << ','
            << (r.vacuous_accept ? 1 : 0) << ',' << csv_number(r.elapsed_ms) << '\n';
    }
    if (!out)
        throw DataError("failed writing trajectory file: " + path);
}

std::vector<TrajectoryRecord> read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open trajectory file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kTrajectoryHeader)
        throw DataError(path + ": missing or unexpected trajectory header");
    std::vector<TrajectoryRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ','))
            fields.push_back(f);
        if (line.back() == ',')
            fields.emplace_back();
        if (fields.size() != 10)
            throw DataError(path + ": expected 10 fields per trajectory row");
        TrajectoryRecord r;
        r.iteration = std::strtol(fields[0].c_str(), nullptr, 10);
        r.sample_size = static_cast<index_t>(std::strtoll(fields[1].c_str(), nullptr, 10));
        r.f_sampled = parse_field(fields[2], path);
        r.f_full = parse_field(fields[3], path);
        r.dir_norm = parse_field(fields[4], path);
        r.delta = parse_field(fields[5], path);
        r.step = parse_field(fields[6], path);
        r.accepted = fields[7] == "1";
        r.vacuous_accept = fields[8] == "1";
        r.elapsed_ms = parse_field(fields[9], path);
        out.push_back(r);
    }
    return out;
}

SolverState init_state(const SolverConfig& cfg, const Dataset& data) {
    cfg.validate(data.rows());
    const index_t m = data.rows();
    const double gamma = cfg.gamma_rbf > 0.0 ? cfg.gamma_rbf : default_rbf_gamma(data.features);

    SolverState st{
        .incumbent = {},
        .prev_direction = {},
        .delta = cfg.delta0,
        .kernel = GrowingKernel(gamma, cfg.kernel_cap),
        .labels = {},
        .sample_stream = SampleStream(m, rng::derive_seed(cfg.seed, 0x5a3fULL)),
        .validation_stream = SampleStream(m, rng::derive_seed(cfg.seed, 0x7e57ULL)),
        .iteration = 0,
        .trajectory = {},
        .last_dir_norm = std::numeric_limits<double>::infinity(),
        .sampling_exhausted = false,
        .seed = cfg.seed,
        .start_time = std::chrono::steady_clock::now(),
    };

    std::vector<index_t> s0;
    if (cfg.full_sample) {
        s0.resize(static_cast<std::size_t>(m));
        std::iota(s0.begin(), s0.end(), index_t{0});
    } else {
        s0 = st.sample_stream.draw_next(std::min({cfg.initial_sample, m, cfg.kernel_cap}));
    }
    st.kernel.extend(s0, data);
    st.labels = labels_for(data, st.kernel.active_rows());
    st.incumbent = Eigen::VectorXd::Zero(st.kernel.size());

    // Seed direction: the negated subgradient at 0. Seeding with +g would put
    // {-g, g} into the first bundle, whose minimum-norm point is 0, and the
    // direction recursion never recovers from an exact zero.
    SampledObjective f0(st.kernel, st.labels);
    st.cached_subgradient = f0.subgradient(st.incumbent);
    st.cached_value = f0.eval(st.incumbent).value;
    st.cache_valid = true;
    st.prev_direction = -st.cached_subgradient;
    return st;
}

void step(SolverState& st, const SolverConfig& cfg, const Dataset& data) {
    const long k = st.iteration + 1;
    const double delta_prev = st.delta;

    // (1)-(2): subgradient of f_{k-1} at the incumbent, conjugate direction.
    // Once the sample stops growing the objective is frozen, so the value and
    // subgradient at the incumbent carry over from the previous iteration.
    SampledObjective f_prev(st.kernel, st.labels);
    const Eigen::VectorXd g =
        st.cache_valid ? st.cached_subgradient : f_prev.subgradient(st.incumbent);
    const DirectionStep dir = min_norm_direction(st.prev_direction, g);
    const double dnorm = dir.d.norm();

    // (3): line search under the incoming radius. A zero direction cannot be
    // searched; it behaves as a collapsed step.
    double t = 0.0;
    double ls_f_inc = kNaN;
    double ls_f_cand = kNaN;
    Eigen::VectorXd next_bundle_dir = dir.d;
    if (dnorm > 0.0) {
        const LineSearchParams p{cfg.m1, cfg.m2, cfg.n, delta_prev, cfg.max_bisections};
        const LineSearchResult ls = search(f_prev, st.incumbent, dir.d, p);
        t = ls.t;
        ls_f_inc = ls.f_base;
        ls_f_cand = ls.f_step;
        if (t == 0.0 && ls.witness_t > 0.0) {
            // Null step: fold the witness subgradient into the bundle. The
            // witness point is outside L, so <g_w, d> > -m1 ||d||^2 and the
            // minimum-norm update contracts strictly; without this the
            // direction freezes once the pool stops yielding fresh samples.
            const Eigen::VectorXd gw = f_prev.subgradient(st.incumbent + ls.witness_t * dir.d);
            next_bundle_dir = min_norm_direction(dir.d, gw).d;
        }
    }

    // (4): candidate in the old coordinates. Its subgradient is taken now in
    // case the acceptance test below keeps the incumbent: folding an
    // R-certified candidate subgradient into the bundle contracts ||d||
    // strictly, so a rejection still makes progress. Must precede kernel
    // growth, which invalidates f_prev.
    const Eigen::VectorXd candidate = st.incumbent + t * dir.d;
    Eigen::VectorXd cand_subgrad;
    if (t > 0.0)
        cand_subgrad = f_prev.subgradient(candidate);

    // (5): grow the sample and the kernel.
    if (!cfg.full_sample) {
        index_t want = 0;
        if (cfg.growth == GrowthPolicy::geometric) {
            want = std::max<index_t>(
                1, static_cast<index_t>(std::ceil(cfg.growth_rho *
                                                  static_cast<double>(st.kernel.size()))));
        } else {
            // Theory schedule targets the Hoeffding bound at the radius that
            // governed this iteration's line search.
            long long target = min_sample_size(cfg.epsilon, cfg.kappa, delta_prev, cfg.big_m);
            target = std::min<long long>(target, data.rows());
            want = static_cast<index_t>(std::max<long long>(0, target - st.kernel.size()));
        }
        const index_t cap_room = st.kernel.max_active() - st.kernel.size();
        if (want > cap_room) {
            want = cap_room;
            st.sampling_exhausted = true;
        }
        std::vector<index_t> sk;
        if (want > 0) {
            sk = st.sample_stream.draw_next(want);
            if (static_cast<index_t>(sk.size()) < want)
                st.sampling_exhausted = true;
        }
        if (!sk.empty()) {
            st.kernel.extend(sk, data);
            Eigen::VectorXd labels(st.kernel.size());
            labels << st.labels, labels_for(data, sk);
            st.labels = std::move(labels);
        }
    }
    const index_t ns = st.kernel.size();
    const bool grew = ns > candidate.size();

    const Eigen::VectorXd beta = pad(candidate, ns);
    const Eigen::VectorXd beta_prev = pad(st.incumbent, ns);

    // (6)-(7): sampled and independent estimates at both points, acceptance.
    // While the objective is frozen the line search already produced both
    // values; a zero step needs only one evaluation either way.
    SampledObjective f_k(st.kernel, st.labels);
    double fk_inc;
    double fk_cand;
    if (!grew && !std::isnan(ls_f_inc)) {
        fk_inc = ls_f_inc;
        fk_cand = ls_f_cand;
    } else {
        fk_inc = !grew && st.cache_valid ? st.cached_value : f_k.eval(beta_prev).value;
        fk_cand = t == 0.0 ? fk_inc : f_k.eval(beta).value;
    }

    double fhat_cand = fk_cand;
    double fhat_inc = fk_inc;
    // A full-pool draw makes the estimate coincide with f_k exactly (same
    // rows, order-invariant sums), so only the literal square-form reading
    // still needs an explicit evaluation there.
    const bool whole_pool = ns == data.rows();
    if (!cfg.full_sample && !(whole_pool && !cfg.validation_literal)) {
        st.validation_stream = SampleStream(
            data.rows(), rng::derive_seed(st.seed, 0x7e570000ULL + static_cast<std::uint64_t>(k)));
        const std::vector<index_t> tk = st.validation_stream.draw_next(ns);
        const Eigen::VectorXd labels_t = labels_for(data, tk);
        if (cfg.validation_literal) {
            GrowingKernel kt(st.kernel.gamma(), ns);
            kt.extend(tk, data);
            SampledObjective ft(kt, labels_t);
            fhat_cand = ft.eval(beta).value;
            fhat_inc = ft.eval(beta_prev).value;
        } else {
            const Eigen::MatrixXd cross = st.kernel.cross_rows(tk, data);
            fhat_cand = eval_validation(f_k, cross, labels_t, beta).value;
            fhat_inc = eval_validation(f_k, cross, labels_t, beta_prev).value;
        }
    }

    const double lhs = fk_cand - fk_inc;
    const double rhs = fhat_cand - fhat_inc;
    const bool accepted = lhs <= cfg.eta1 * rhs && dnorm > cfg.eta2 * delta_prev;
    if (accepted) {
        st.incumbent = beta;
        st.delta = std::min(cfg.gamma_tr * delta_prev, cfg.resolved_delta_max());
    } else {
        st.incumbent = beta_prev;
        st.delta = std::max(delta_prev / cfg.gamma_tr, cfg.delta_min);
        if (t > 0.0)
            next_bundle_dir = min_norm_direction(dir.d, cand_subgrad).d;
    }
    st.prev_direction = pad(next_bundle_dir, ns);
    if (grew) {
        st.cache_valid = false;
    } else if (accepted && t > 0.0) {
        st.cached_subgradient = cand_subgrad;
        st.cached_value = fk_cand;
        st.cache_valid = true;
    } else {
        st.cached_subgradient = g;
        st.cached_value = fk_inc;
        st.cache_valid = true;
    }
    st.last_dir_norm = dnorm;
    st.iteration = k;

    // (8): record.
    TrajectoryRecord rec;
    rec.iteration = k;
    rec.sample_size = ns;
    rec.f_sampled = accepted ? fk_cand : fk_inc;
    rec.f_full = kNaN;
    if (k == 1 || k % cfg.log_stride == 0) {
        // With the whole pool active, f_S is the sampled objective itself.
        rec.f_full = whole_pool ? rec.f_sampled : eval_full(data, st.kernel, st.incumbent).value;
    }
    rec.dir_norm = dnorm;
    rec.delta = st.delta;
    rec.step = t;
    rec.accepted = accepted;
    rec.vacuous_accept = accepted && rhs > 0.0;
    rec.elapsed_ms =
        cfg.budget_mode == BudgetMode::steps ? 0.0 : elapsed_ms_since(st.start_time);
    st.trajectory.push_back(rec);
}

SolveResult solve(const SolverConfig& cfg, const Dataset& data) {
    SolverState st = init_state(cfg, data);
    StopReason reason = StopReason::max_iters;
    while (st.iteration < cfg.max_iters) {
        if (cfg.budget_mode == BudgetMode::wall_clock &&
            elapsed_ms_since(st.start_time) > cfg.budget_s * 1000.0) {
            reason = StopReason::wall_clock;
            break;
        }
        step(st, cfg, data);
        if (st.last_dir_norm <= cfg.epsilon && st.delta <= cfg.delta_min) {
            reason = StopReason::converged;
            break;
        }
    }

    SolveResult r;
    r.alpha = st.incumbent;
    r.active = st.kernel.active_rows();
    r.stop = reason;
    r.iterations = st.iteration;
    r.elapsed_ms = elapsed_ms_since(st.start_time); // records stay zeroed in steps mode
    r.final_dir_norm = st.last_dir_norm;
    r.final_delta = st.delta;
    r.sampling_exhausted = st.sampling_exhausted;
    if (!st.trajectory.empty() && std::isnan(st.trajectory.back().f_full)) {
        TrajectoryRecord& last = st.trajectory.back();
        // Same whole-pool identity the stride rows use.
        last.f_full = last.sample_size == data.rows()
                          ? last.f_sampled
                          : eval_full(data, st.kernel, st.incumbent).value;
    }
    r.final_f_full = st.trajectory.empty() ? eval_full(data, st.kernel, st.incumbent).value
                                           : st.trajectory.back().f_full;
    r.trajectory = std::move(st.trajectory);
    return r;
}

} // namespace scsvm
