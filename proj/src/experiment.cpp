#include "scsvm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "scsvm/errors.hpp"
#include "scsvm/kernel.hpp"
#include "scsvm/rng.hpp"
#include "scsvm/synthetic.hpp"

namespace scsvm {

namespace fs = std::filesystem;

Model make_model(double gamma, const Standardizer& scaler, const Dataset& std_train,
                 const std::vector<index_t>& active, const Eigen::VectorXd& alpha) {
    if (static_cast<index_t>(active.size()) != alpha.size())
        throw ConfigError("model: active/alpha size mismatch");
    if (!(gamma > 0.0))
        throw ConfigError("model: gamma must be positive");
    Model m;
    m.gamma = gamma;
    m.scaler = scaler;
    m.alpha = alpha;
    m.active_features.resize(static_cast<index_t>(active.size()), std_train.cols());
    for (std::size_t i = 0; i < active.size(); ++i) {
        if (active[i] < 0 || active[i] >= std_train.rows())
            throw ConfigError("model: active row out of range");
        m.active_features.row(static_cast<index_t>(i)) = std_train.features.row(active[i]);
    }
    return m;
}

double decision_value(const Model& model, const Eigen::VectorXd& raw_features) {
    const Eigen::VectorXd x = model.scaler.transform_row(raw_features);
    double s = 0.0;
    for (index_t i = 0; i < model.alpha.size(); ++i)
        s += model.alpha[i] * rbf(model.active_features.row(i).transpose(), x, model.gamma);
    return s;
}

double accuracy(const Model& model, const Dataset& raw_test) {
    if (raw_test.rows() == 0)
        throw DataError("accuracy: empty test set");
    index_t correct = 0;
    for (index_t i = 0; i < raw_test.rows(); ++i) {
        const double pred =
            decision_value(model, raw_test.features.row(i).transpose()) >= 0.0 ? 1.0 : -1.0;
        if (pred == raw_test.labels[i])
            ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(raw_test.rows());
}

void save_model(const std::string& path, const Model& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError("cannot open model file for writing: " + path);
    const index_t p = model.active_features.cols();
    const index_t n = model.active_features.rows();
    out << "scsvm-model 1\n";
    out << p << ' ' << n << ' ' << csv_number(model.gamma) << '\n';
    auto emit_vec = [&out](const Eigen::VectorXd& v) {
        for (index_t j = 0; j < v.size(); ++j)
            out << (j ? " " : "") << csv_number(v[j]);
        out << '\n';
    };
    emit_vec(model.scaler.mean());
    emit_vec(model.scaler.stddev());
    emit_vec(model.alpha);
    for (index_t i = 0; i < n; ++i)
        emit_vec(model.active_features.row(i).transpose());
    if (!out)
        throw DataError("failed writing model file: " + path);
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open model file: " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "scsvm-model" || version != 1)
        throw DataError(path + ": not a model file");
    index_t p = -1;
    index_t n = -1;
    double gamma = 0.0;
    in >> p >> n >> gamma;
    if (!in || p < 0 || n < 0)
        throw DataError(path + ": malformed model header");
    auto read_vec = [&in, &path](index_t len) {
        Eigen::VectorXd v(len);
        for (index_t j = 0; j < len; ++j) {
            if (!(in >> v[j]))
                throw DataError(path + ": truncated model file");
        }
        return v;
    };
    const Eigen::VectorXd mean = read_vec(p);
    const Eigen::VectorXd stddev = read_vec(p);
    Model m;
    m.gamma = gamma;
    m.scaler = Standardizer::from_moments(mean, stddev);
    m.alpha = read_vec(n);
    m.active_features.resize(n, p);
    for (index_t i = 0; i < n; ++i)
        m.active_features.row(i) = read_vec(p).transpose();
    return m;
}

void ExperimentSpec::validate() const {
    if (algo != "scs" && algo != "pegasos" && algo != "wolfe")
        throw ConfigError("experiment: unknown algorithm '" + algo + "'");
    if (seeds.empty())
        throw ConfigError("experiment: at least one seed is required");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("experiment: test_fraction must lie in (0, 1)");
    if (out_dir.empty())
        throw ConfigError("experiment: output directory must be set");
    if (!(pegasos_lambda > 0.0))
        throw ConfigError("experiment: lambda must be positive");
    if (pegasos_max_steps < 0 || pegasos_log_stride < 1)
        throw ConfigError("experiment: pegasos budget fields must be positive");
    if (dataset_path.empty())
        synthetic_kind_from(synthetic_kind); // throws on an unknown kind
}

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
        throw ConfigError("config: invalid number for " + key + ": '" + value + "'");
    return v;
}

long long to_ll(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size())
        throw ConfigError("config: invalid integer for " + key + ": '" + value + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size())
        throw ConfigError("config: invalid integer for " + key + ": '" + value + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on")
        return true;
    if (value == "0" || value == "false" || value == "off")
        return false;
    throw ConfigError("config: invalid boolean for " + key + ": '" + value + "'");
}

} // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& value) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trimmed(token);
        if (token.empty())
            throw ConfigError("config: empty seed entry in '" + value + "'");
        const auto range = token.find("..");
        if (range != std::string::npos) {
            const std::uint64_t a = to_u64("seeds", token.substr(0, range));
            const std::uint64_t b = to_u64("seeds", token.substr(range + 2));
            if (b < a || b - a > 10000)
                throw ConfigError("config: bad seed range '" + token + "'");
            for (std::uint64_t s = a; s <= b; ++s)
                seeds.push_back(s);
        } else {
            seeds.push_back(to_u64("seeds", token));
        }
    }
    if (seeds.empty())
        throw ConfigError("config: no seeds in '" + value + "'");
    return seeds;
}

void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    if (key == "dataset") {
        spec.dataset_path = value;
    } else if (key == "format") {
        if (value == "csv")
            spec.load.format = DataFormat::csv;
        else if (value == "sparse")
            spec.load.format = DataFormat::sparse_index_value;
        else
            throw ConfigError("config: unknown format '" + value + "'");
    } else if (key == "has-header") {
        spec.load.has_header = to_bool(key, value);
    } else if (key == "label-column") {
        spec.load.label_column = static_cast<int>(to_ll(key, value));
    } else if (key == "algo") {
        spec.algo = value;
    } else if (key == "seeds") {
        spec.seeds = parse_seed_list(value);
    } else if (key == "epsilon") {
        spec.solver.epsilon = to_double(key, value);
    } else if (key == "delta0") {
        spec.solver.delta0 = to_double(key, value);
    } else if (key == "delta-min") {
        spec.solver.delta_min = to_double(key, value);
    } else if (key == "delta-max") {
        spec.solver.delta_max = to_double(key, value);
    } else if (key == "auto-delta-max") {
        spec.solver.auto_delta_max = to_bool(key, value);
    } else if (key == "eta1") {
        spec.solver.eta1 = to_double(key, value);
    } else if (key == "eta2") {
        spec.solver.eta2 = to_double(key, value);
    } else if (key == "gamma-tr") {
        spec.solver.gamma_tr = to_double(key, value);
    } else if (key == "kappa") {
        spec.solver.kappa = to_double(key, value);
    } else if (key == "big-m") {
        spec.solver.big_m = to_double(key, value);
    } else if (key == "n") {
        spec.solver.n = static_cast<int>(to_ll(key, value));
    } else if (key == "m1") {
        spec.solver.m1 = to_double(key, value);
    } else if (key == "m2") {
        spec.solver.m2 = to_double(key, value);
    } else if (key == "max-bisections") {
        spec.solver.max_bisections = static_cast<int>(to_ll(key, value));
    } else if (key == "initial-sample") {
        spec.solver.initial_sample = static_cast<index_t>(to_ll(key, value));
    } else if (key == "growth") {
        if (value == "geometric")
            spec.solver.growth = GrowthPolicy::geometric;
        else if (value == "theory")
            spec.solver.growth = GrowthPolicy::theory;
        else
            throw ConfigError("config: unknown growth policy '" + value + "'");
    } else if (key == "growth-rho") {
        spec.solver.growth_rho = to_double(key, value);
    } else if (key == "max-iters") {
        spec.solver.max_iters = static_cast<long>(to_ll(key, value));
    } else if (key == "budget-s") {
        spec.solver.budget_s = to_double(key, value);
    } else if (key == "budget-mode") {
        if (value == "wall")
            spec.solver.budget_mode = BudgetMode::wall_clock;
        else if (value == "steps")
            spec.solver.budget_mode = BudgetMode::steps;
        else
            throw ConfigError("config: unknown budget mode '" + value + "'");
    } else if (key == "gamma-rbf") {
        spec.solver.gamma_rbf = to_double(key, value);
    } else if (key == "kernel-cap") {
        spec.solver.kernel_cap = static_cast<index_t>(to_ll(key, value));
    } else if (key == "log-stride") {
        spec.solver.log_stride = static_cast<long>(to_ll(key, value));
    } else if (key == "validation-literal") {
        spec.solver.validation_literal = to_bool(key, value);
    } else if (key == "c1-override") {
        spec.solver.c1_override = to_double(key, value);
    } else if (key == "lambda") {
        spec.pegasos_lambda = to_double(key, value);
    } else if (key == "pegasos-steps") {
        spec.pegasos_max_steps = static_cast<long>(to_ll(key, value));
    } else if (key == "pegasos-stride") {
        spec.pegasos_log_stride = static_cast<long>(to_ll(key, value));
    } else if (key == "test-fraction") {
        spec.test_fraction = to_double(key, value);
    } else if (key == "out") {
        spec.out_dir = value;
    } else if (key == "synthetic-kind") {
        spec.synthetic_kind = value;
    } else if (key == "synthetic-m") {
        spec.synthetic_m = static_cast<index_t>(to_ll(key, value));
    } else if (key == "synthetic-noise") {
        spec.synthetic_noise = to_double(key, value);
    } else if (key == "synthetic-seed") {
        spec.synthetic_seed = to_u64(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

std::string spec_to_text(const ExperimentSpec& spec) {
    std::ostringstream out;
    auto kv = [&out](const char* k, const std::string& v) { out << k << '=' << v << '\n'; };
    auto kd = [&kv](const char* k, double v) { kv(k, csv_number(v)); };
    auto ki = [&kv](const char* k, long long v) { kv(k, std::to_string(v)); };

    if (!spec.dataset_path.empty())
        kv("dataset", spec.dataset_path);
    kv("format", spec.load.format == DataFormat::csv ? "csv" : "sparse");
    ki("has-header", spec.load.has_header ? 1 : 0);
    ki("label-column", spec.load.label_column);
    kv("synthetic-kind", spec.synthetic_kind);
    ki("synthetic-m", spec.synthetic_m);
    kd("synthetic-noise", spec.synthetic_noise);
    kv("synthetic-seed", std::to_string(spec.synthetic_seed));

    kv("algo", spec.algo);
    std::string seeds;
    for (std::size_t i = 0; i < spec.seeds.size(); ++i)
        seeds += (i ? "," : "") + std::to_string(spec.seeds[i]);
    kv("seeds", seeds);
    kd("test-fraction", spec.test_fraction);
    kv("out", spec.out_dir);

    kd("epsilon", spec.solver.epsilon);
    kd("delta0", spec.solver.delta0);
    kd("delta-min", spec.solver.delta_min);
    kd("delta-max", spec.solver.delta_max);
    ki("auto-delta-max", spec.solver.auto_delta_max ? 1 : 0);
    kd("eta1", spec.solver.eta1);
    kd("eta2", spec.solver.eta2);
    kd("gamma-tr", spec.solver.gamma_tr);
    kd("kappa", spec.solver.kappa);
    kd("big-m", spec.solver.big_m);
    ki("n", spec.solver.n);
    kd("m1", spec.solver.m1);
    kd("m2", spec.solver.m2);
    ki("max-bisections", spec.solver.max_bisections);
    ki("initial-sample", spec.solver.initial_sample);
    kv("growth", spec.solver.growth == GrowthPolicy::geometric ? "geometric" : "theory");
    kd("growth-rho", spec.solver.growth_rho);
    ki("max-iters", spec.solver.max_iters);
    kd("budget-s", spec.solver.budget_s);
    kv("budget-mode", spec.solver.budget_mode == BudgetMode::wall_clock ? "wall" : "steps");
    kd("gamma-rbf", spec.solver.gamma_rbf);
    ki("kernel-cap", spec.solver.kernel_cap);
    ki("log-stride", spec.solver.log_stride);
    ki("validation-literal", spec.solver.validation_literal ? 1 : 0);
    kd("c1-override", spec.solver.c1_override);

    kd("lambda", spec.pegasos_lambda);
    ki("pegasos-steps", spec.pegasos_max_steps);
    ki("pegasos-stride", spec.pegasos_log_stride);
    return out.str();
}

ExperimentSpec parse_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    ExperimentSpec spec;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trimmed(line);
        if (s.empty() || s[0] == '#')
            continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_override(spec, trimmed(s.substr(0, eq)), trimmed(s.substr(eq + 1)));
    }
    return spec;
}

namespace {

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd out;
    if (xs.empty())
        return out;
    for (double x : xs)
        out.mean += x;
    out.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double acc = 0.0;
        for (double x : xs)
            acc += (x - out.mean) * (x - out.mean);
        out.std = std::sqrt(acc / static_cast<double>(xs.size() - 1));
    }
    return out;
}

SeedOutcome run_single(const ExperimentSpec& spec, const Dataset& raw, std::uint64_t seed) {
    SeedOutcome out;
    out.seed = seed;
    auto [train, test] = split(raw, spec.test_fraction, rng::derive_seed(seed, 0x59171ULL));
    const Standardizer scaler = Standardizer::fit(train.features);
    const Dataset train_std = scaler.applied(train);
    const double gamma = spec.solver.gamma_rbf > 0.0 ? spec.solver.gamma_rbf
                                                     : default_rbf_gamma(train_std.features);

    std::vector<index_t> active;
    Eigen::VectorXd alpha;
    std::vector<TrajectoryRecord> traj;
    if (spec.algo == "pegasos") {
        PegasosRunConfig rc;
        rc.lambda = spec.pegasos_lambda;
        rc.gamma_rbf = spec.solver.gamma_rbf;
        rc.max_steps = spec.pegasos_max_steps;
        rc.budget_s = spec.solver.budget_s;
        rc.budget_mode = spec.solver.budget_mode;
        rc.seed = seed;
        rc.log_stride = spec.pegasos_log_stride;
        PegasosRun pr = pegasos_run(train_std, rc);
        active = pr.support;
        alpha.resize(static_cast<index_t>(active.size()));
        for (std::size_t i = 0; i < active.size(); ++i)
            alpha[static_cast<index_t>(i)] = pr.alpha[active[i]];
        traj = std::move(pr.trajectory);
        out.final_f_full = pr.final_f_full;
        out.elapsed_ms = pr.elapsed_ms;
        out.iterations = pr.steps;
    } else {
        SolverConfig cfg = spec.solver;
        cfg.seed = seed;
        SolveResult res;
        try {
            res = spec.algo == "wolfe" ? wolfe_deterministic(train_std, cfg)
                                       : solve(cfg, train_std);
        } catch (const ConfigError& e) {
            if (std::string(e.what()).rfind("full-SAA infeasible", 0) == 0) {
                out.feasible = false;
                out.note = e.what();
                return out;
            }
            throw;
        }
        active = std::move(res.active);
        alpha = std::move(res.alpha);
        traj = std::move(res.trajectory);
        out.final_f_full = res.final_f_full;
        out.elapsed_ms = res.elapsed_ms;
        out.iterations = res.iterations;
    }

    const std::string base = spec.algo + "_seed" + std::to_string(seed);
    out.trajectory_path = (fs::path(spec.out_dir) / (base + ".csv")).string();
    out.model_path = (fs::path(spec.out_dir) / (base + ".model")).string();
    write_trajectory(out.trajectory_path, traj);
    save_model(out.model_path, make_model(gamma, scaler, train_std, active, alpha));
    // accuracy from the persisted artifact, not the in-memory state
    out.accuracy = accuracy(load_model(out.model_path), test);
    return out;
}

} // namespace

std::string ExperimentSummary::text() const {
    std::ostringstream out;
    out.precision(6);
    out << "experiment: algo=" << algo << " runs=" << per_seed.size()
        << " feasible=" << feasible_runs << '\n';
    if (feasible_runs > 0) {
        out << "  test accuracy : mean=" << mean_accuracy << " std=" << std_accuracy << '\n';
        out << "  final f_S     : mean=" << mean_final_f << " std=" << std_final_f << '\n';
        out << "  wall time (ms): mean=" << mean_elapsed_ms << '\n';
    } else {
        out << "  test accuracy : N/A\n  final f_S     : N/A\n  wall time (ms): N/A\n";
    }
    for (const auto& s : per_seed) {
        if (s.feasible) {
            out << "  seed=" << s.seed << " acc=" << s.accuracy << " f=" << s.final_f_full
                << " ms=" << s.elapsed_ms << " iters=" << s.iterations << '\n';
        } else {
            out << "  seed=" << s.seed << " N/A (" << s.note << ")\n";
        }
    }
    return out.str();
}

ExperimentSummary run(const ExperimentSpec& spec) {
    spec.validate();
    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    if (ec)
        throw DataError("cannot create output directory " + spec.out_dir + ": " + ec.message());
    {
        std::ofstream sf(fs::path(spec.out_dir) / "spec.txt", std::ios::binary);
        if (!sf)
            throw DataError("cannot write spec.txt under " + spec.out_dir);
        sf << spec_to_text(spec);
    }

    const Dataset raw =
        spec.dataset_path.empty()
            ? gen_synthetic(synthetic_kind_from(spec.synthetic_kind), spec.synthetic_m,
                            spec.synthetic_noise, spec.synthetic_seed)
            : load(spec.dataset_path, spec.load);

    const std::size_t nseeds = spec.seeds.size();
    std::vector<SeedOutcome> outs(nseeds);
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), nseeds);
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto worker = [&](std::size_t w) {
        try {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= nseeds)
                    return;
                outs[i] = run_single(spec, raw, spec.seeds[i]);
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker, w);
        for (auto& th : pool)
            th.join();
    }
    for (auto& e : errors) {
        if (e)
            std::rethrow_exception(e);
    }

    ExperimentSummary sum;
    sum.algo = spec.algo;
    sum.per_seed = std::move(outs);
    std::vector<double> accs;
    std::vector<double> finals;
    std::vector<double> times;
    for (const auto& s : sum.per_seed) {
        if (!s.feasible)
            continue;
        accs.push_back(s.accuracy);
        finals.push_back(s.final_f_full);
        times.push_back(s.elapsed_ms);
    }
    sum.feasible_runs = static_cast<index_t>(accs.size());
    const MeanStd a = mean_std(accs);
    const MeanStd f = mean_std(finals);
    const MeanStd t = mean_std(times);
    sum.mean_accuracy = a.mean;
    sum.std_accuracy = a.std;
    sum.mean_final_f = f.mean;
    sum.std_final_f = f.std;
    sum.mean_elapsed_ms = t.mean;

    std::ofstream csv(fs::path(spec.out_dir) / "summary.csv", std::ios::binary);
    if (!csv)
        throw DataError("cannot write summary.csv under " + spec.out_dir);
    csv << "seed,algo,feasible,accuracy,final_f_full,elapsed_ms,iterations\n";
    for (const auto& s : sum.per_seed) {
        csv << s.seed << ',' << spec.algo << ',' << (s.feasible ? 1 : 0) << ',';
        if (s.feasible) {
            csv << csv_number(s.accuracy) << ',' << csv_number(s.final_f_full) << ','
                << csv_number(s.elapsed_ms) << ',' << s.iterations << '\n';
        } else {
            csv << ",,,\n";
        }
    }
    return sum;
}

std::string compare_report(const std::vector<NamedTrajectory>& trajectories) {
    if (trajectories.empty())
        throw ConfigError("compare_report: no trajectories");
    auto value_of = [](const TrajectoryRecord& r) {
        return std::isnan(r.f_full) ? r.f_sampled : r.f_full;
    };
    auto safe_name = [](std::string name) {
        std::replace(name.begin(), name.end(), ',', '_');
        return name;
    };

    std::ostringstream out;
    out << "segment,row";
    for (const auto& t : trajectories)
        out << ',' << safe_name(t.name) << "_iteration," << safe_name(t.name) << "_objective";
    out << '\n';

    auto emit = [&](const char* segment, bool from_end) {
        std::size_t rows = 0;
        for (const auto& t : trajectories)
            rows = std::max(rows, std::min<std::size_t>(50, t.records.size()));
        for (std::size_t r = 0; r < rows; ++r) {
            out << segment << ',' << r + 1;
            for (const auto& t : trajectories) {
                const std::size_t count = std::min<std::size_t>(50, t.records.size());
                if (r < count) {
                    const auto& rec =
                        from_end ? t.records[t.records.size() - count + r] : t.records[r];
                    out << ',' << rec.iteration << ',' << csv_number(value_of(rec));
                } else {
                    out << ",,";
                }
            }
            out << '\n';
        }
    };
    emit("first", false);
    emit("last", true);
    return out.str();
}

} // namespace scsvm
