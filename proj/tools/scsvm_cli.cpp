#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "scsvm/experiment.hpp"
#include "scsvm/oracle.hpp"
#include "scsvm/synthetic.hpp"

namespace {

using KeyValue = std::pair<std::string, std::string>;

// One flag per config key; values are routed through apply_override so the
// CLI and the config-file format cannot drift apart.
void add_spec_flags(CLI::App& cmd, std::vector<KeyValue>& overrides) {
    static const char* const keys[] = {
        "dataset",      "format",        "has-header",     "label-column",
        "algo",         "seeds",         "epsilon",        "delta0",
        "delta-min",    "delta-max",     "auto-delta-max", "eta1",
        "eta2",         "gamma-tr",      "kappa",          "big-m",
        "n",            "m1",            "m2",             "max-bisections",
        "initial-sample", "growth",      "growth-rho",     "max-iters",
        "budget-s",     "budget-mode",   "gamma-rbf",      "kernel-cap",
        "log-stride",   "validation-literal", "c1-override", "lambda",
        "pegasos-steps", "pegasos-stride", "test-fraction", "out",
        "synthetic-kind", "synthetic-m", "synthetic-noise", "synthetic-seed",
    };
    for (const char* key : keys) {
        cmd.add_option_function<std::string>(
            "--" + std::string(key),
            [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); });
    }
}

scsvm::ExperimentSpec build_spec(const std::string& config_path,
                                 const std::vector<KeyValue>& overrides) {
    scsvm::ExperimentSpec spec =
        config_path.empty() ? scsvm::ExperimentSpec{} : scsvm::parse_experiment_file(config_path);
    for (const auto& [key, value] : overrides)
        scsvm::apply_override(spec, key, value);
    return spec;
}

scsvm::Dataset spec_dataset(const scsvm::ExperimentSpec& spec) {
    if (spec.dataset_path.empty())
        return scsvm::gen_synthetic(scsvm::synthetic_kind_from(spec.synthetic_kind),
                                    spec.synthetic_m, spec.synthetic_noise, spec.synthetic_seed);
    return scsvm::load(spec.dataset_path, spec.load);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel SVM trainer and benchmark harness "
                 "(stochastic conjugate subgradient, Pegasos, Wolfe)"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Train over a seed list and summarize");
    std::string run_config;
    run_cmd->add_option("--config", run_config, "key=value experiment file; flags override it");
    std::vector<KeyValue> run_overrides;
    add_spec_flags(*run_cmd, run_overrides);
    run_cmd->callback([&]() {
        const scsvm::ExperimentSummary summary = scsvm::run(build_spec(run_config, run_overrides));
        std::cout << summary.text();
    });

    auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic two-class dataset as CSV");
    std::string gen_kind = "blobs";
    long gen_m = 2000;
    double gen_noise = 0.5;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "synthetic.csv";
    gen_cmd->add_option("--kind", gen_kind, "blobs | moons-like");
    gen_cmd->add_option("--m", gen_m, "number of rows (>= 4)");
    gen_cmd->add_option("--noise", gen_noise, "noise scale (>= 0)");
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("--out", gen_out, "output CSV path");
    gen_cmd->callback([&]() {
        const scsvm::Dataset d = scsvm::gen_synthetic(scsvm::synthetic_kind_from(gen_kind),
                                                      static_cast<scsvm::index_t>(gen_m),
                                                      gen_noise, gen_seed);
        std::ofstream out(gen_out, std::ios::binary);
        if (!out)
            throw scsvm::DataError("cannot open output file: " + gen_out);
        out << "x1,x2,label\n";
        for (scsvm::index_t i = 0; i < d.rows(); ++i) {
            out << scsvm::csv_number(d.features(i, 0)) << ',' << scsvm::csv_number(d.features(i, 1))
                << ',' << static_cast<int>(d.labels[i]) << '\n';
        }
        if (!out)
            throw scsvm::DataError("failed writing " + gen_out);
        std::cout << "wrote " << d.rows() << " rows to " << gen_out << '\n';
    });

    auto* report_cmd =
        app.add_subcommand("report", "First-50/last-50 objective table from trajectory files");
    std::vector<std::string> report_files;
    std::vector<std::string> report_names;
    std::string report_out;
    report_cmd->add_option("files", report_files, "trajectory CSV files")->required();
    report_cmd->add_option("--names", report_names, "column labels (default: file stems)");
    report_cmd->add_option("--out", report_out, "write the table here instead of stdout");
    report_cmd->callback([&]() {
        if (!report_names.empty() && report_names.size() != report_files.size())
            throw scsvm::ConfigError("report: --names count must match the file count");
        std::vector<scsvm::NamedTrajectory> trajectories;
        trajectories.reserve(report_files.size());
        for (std::size_t i = 0; i < report_files.size(); ++i) {
            const std::string name = report_names.empty()
                                         ? std::filesystem::path(report_files[i]).stem().string()
                                         : report_names[i];
            trajectories.push_back({name, scsvm::read_trajectory(report_files[i])});
        }
        const std::string table = scsvm::compare_report(trajectories);
        if (report_out.empty()) {
            std::cout << table;
        } else {
            std::ofstream out(report_out, std::ios::binary);
            if (!out)
                throw scsvm::DataError("cannot open output file: " + report_out);
            out << table;
        }
    });

    auto* certify_cmd =
        app.add_subcommand("certify", "Full-sample Wolfe solve plus optimality certificate");
    std::string certify_config;
    certify_cmd->add_option("--config", certify_config, "key=value experiment file");
    double eps_prime = 1e-3;
    certify_cmd->add_option("--eps-prime", eps_prime, "certificate slack (threshold 4*eps + this)");
    std::vector<KeyValue> certify_overrides;
    add_spec_flags(*certify_cmd, certify_overrides);
    certify_cmd->callback([&]() {
        const scsvm::ExperimentSpec spec = build_spec(certify_config, certify_overrides);
        spec.validate();
        const scsvm::Dataset raw = spec_dataset(spec);
        const scsvm::Standardizer scaler = scsvm::Standardizer::fit(raw.features);
        const scsvm::Dataset data = scaler.applied(raw);
        scsvm::SolverConfig cfg = spec.solver;
        cfg.seed = spec.seeds.front();
        const scsvm::SolveResult res = scsvm::wolfe_deterministic(data, cfg);
        const double gamma = cfg.gamma_rbf > 0.0 ? cfg.gamma_rbf
                                                 : scsvm::default_rbf_gamma(data.features);
        const scsvm::CertificateReport report =
            scsvm::certify_optimality(data, res.active, res.alpha, gamma, cfg.epsilon, eps_prime);
        std::cout << "solver iterations: " << res.iterations
                  << "  final ||d||: " << res.final_dir_norm << '\n'
                  << report.text();
    });

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e); // prints the message
            return 2;
        }
    } catch (const scsvm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const scsvm::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
