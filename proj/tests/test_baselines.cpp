#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "scsvm/baselines.hpp"
#include "scsvm/errors.hpp"
#include "scsvm/objective.hpp"
#include "scsvm/oracle.hpp"
#include "scsvm/synthetic.hpp"

using namespace scsvm;

namespace {

KernelFn rbf_fn(double gamma) {
    return [gamma](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        return rbf(a, b, gamma);
    };
}

} // namespace

TEST_CASE("pegasos initialization and its guards") {
    const PegasosState st = pegasos_init(5, 2.0);
    CHECK(st.counts.size() == 5);
    CHECK(st.counts.maxCoeff() == 0);
    CHECK(st.t == 1);
    CHECK(st.lambda == 2.0);
    CHECK_THROWS_AS(pegasos_init(0, 1.0), DataError);
    CHECK_THROWS_AS(pegasos_init(5, 0.0), ConfigError);
}

TEST_CASE("cold start always updates; a satisfied margin never does") {
    const Dataset d = gen_synthetic(SyntheticKind::blobs, 10, 0.4, 1);
    std::mt19937_64 gen(7);
    PegasosState st = pegasos_init(10);
    // Empty classifier scores 0 on everything: margin 0 < 1.
    CHECK(pegasos_step(st, d, rbf_fn(0.5), gen));
    CHECK(st.t == 2);
    CHECK(st.counts.sum() == 1);

    // One point, one count, small lambda: margin = 1 / (lambda t) = 4 >= 1.
    Dataset one;
    one.features.resize(1, 1);
    one.features << 2.0;
    one.labels.resize(1);
    one.labels << 1.0;
    one.ids = {0};
    PegasosState sat = pegasos_init(1, 0.25);
    sat.counts[0] = 1;
    CHECK_FALSE(pegasos_step(sat, one, rbf_fn(1.0), gen));
    CHECK(sat.counts[0] == 1);
    CHECK(sat.t == 2);

    PegasosState broken = pegasos_init(10);
    broken.t = 0;
    CHECK_THROWS_AS(pegasos_step(broken, d, rbf_fn(0.5), gen), ConfigError);
    PegasosState mismatched = pegasos_init(4);
    CHECK_THROWS_AS(pegasos_step(mismatched, d, rbf_fn(0.5), gen), ConfigError);
}

TEST_CASE("step sequences are deterministic in the generator state") {
    const Dataset d = gen_synthetic(SyntheticKind::blobs, 30, 0.5, 3);
    const KernelFn k = rbf_fn(0.8);
    auto run = [&](std::uint64_t seed) {
        std::mt19937_64 gen(seed);
        PegasosState st = pegasos_init(30);
        for (int i = 0; i < 100; ++i)
            pegasos_step(st, d, k, gen);
        return st;
    };
    const PegasosState a = run(42), b = run(42), c = run(43);
    CHECK(testing::exact_equal(a.counts, b.counts));
    CHECK(a.t == b.t);
    CHECK(!testing::exact_equal(a.counts, c.counts));
    CHECK(a.counts.sum() <= 100); // at most one increment per step
    CHECK(a.t == 101);
}

TEST_CASE("representer coefficients match the counts") {
    const Dataset d = gen_synthetic(SyntheticKind::blobs, 6, 0.4, 5);
    PegasosState st = pegasos_init(6);
    CHECK(pegasos_as_alpha(st, d).norm() == 0.0);

    st.counts[2] = 1; // t = 1, lambda = 1: alpha = w_2 e_2
    const Eigen::VectorXd a = pegasos_as_alpha(st, d);
    CHECK(a[2] == d.labels[2]);
    CHECK(a.cwiseAbs().sum() == 1.0);

    st.t = 0;
    CHECK_THROWS_AS(pegasos_as_alpha(st, d), ConfigError);
    PegasosState mismatched = pegasos_init(3);
    CHECK_THROWS_AS(pegasos_as_alpha(mismatched, d), ConfigError);
}

TEST_CASE("the step's margin rule agrees with the explicit representer scores") {
    const Dataset d = gen_synthetic(SyntheticKind::blobs, 25, 0.6, 9);
    const double gamma = 0.7;
    std::mt19937_64 gen(11);
    PegasosState st = pegasos_init(25);
    const KernelFn k = rbf_fn(gamma);
    for (int i = 0; i < 200; ++i)
        pegasos_step(st, d, k, gen);

    const Eigen::VectorXd alpha = pegasos_as_alpha(st, d);
    const GrowingKernel full = testing::full_kernel(d, gamma);
    const Eigen::VectorXd scores = full.gram() * alpha;
    for (index_t i = 0; i < 25; ++i) {
        double score = 0.0;
        for (index_t j = 0; j < 25; ++j) {
            if (st.counts[j] != 0)
                score += st.counts[j] * d.labels[j] *
                         rbf(d.features.row(j), d.features.row(i), gamma);
        }
        score /= st.lambda * static_cast<double>(st.t);
        CHECK(scores[i] == doctest::Approx(score).epsilon(1e-12));
    }
}

TEST_CASE("pegasos runs log sparse full objectives and repeat exactly") {
    const Dataset d = gen_synthetic(SyntheticKind::blobs, 60, 0.5, 13);
    PegasosRunConfig rc;
    rc.max_steps = 2500;
    rc.budget_mode = BudgetMode::steps;
    rc.log_stride = 1000;
    rc.seed = 7;
    const PegasosRun run = pegasos_run(d, rc);
    CHECK(run.steps == 2500);
    REQUIRE(run.trajectory.size() == 3); // steps 1000, 2000 and the final 2500
    CHECK(run.trajectory[0].iteration == 1000);
    CHECK(run.trajectory[1].iteration == 2000);
    CHECK(run.trajectory[2].iteration == 2500);
    for (const auto& rec : run.trajectory) {
        CHECK(std::isnan(rec.f_sampled)); // no sampled objective for Pegasos
        CHECK(std::isnan(rec.dir_norm));
        CHECK(std::isnan(rec.delta));
        CHECK_FALSE(std::isnan(rec.f_full));
        CHECK(rec.elapsed_ms == 0.0);
        CHECK(rec.step > 0.0);
    }
    CHECK(run.final_f_full == run.trajectory.back().f_full);
    REQUIRE(run.alpha.size() == 60);
    for (const index_t j : run.support)
        CHECK(run.alpha[j] != 0.0);
    CHECK(static_cast<index_t>(run.support.size()) ==
          (run.alpha.array() != 0.0).count());

    const PegasosRun again = pegasos_run(d, rc);
    CHECK(testing::exact_equal(run.alpha, again.alpha));
    CHECK(run.support == again.support);
    CHECK(run.final_f_full == again.final_f_full);

    PegasosRunConfig zero = rc;
    zero.max_steps = 0;
    const PegasosRun none = pegasos_run(d, zero);
    CHECK(none.steps == 0);
    REQUIRE(none.trajectory.size() == 1);
    CHECK(none.trajectory[0].f_full == 1.0); // empty classifier
    CHECK(none.alpha.norm() == 0.0);

    PegasosRunConfig bad = rc;
    bad.max_steps = -1;
    CHECK_THROWS_AS(pegasos_run(d, bad), ConfigError);
    bad = rc;
    bad.budget_s = 0.0;
    CHECK_THROWS_AS(pegasos_run(d, bad), ConfigError);
    bad = rc;
    bad.log_stride = 0;
    CHECK_THROWS_AS(pegasos_run(d, bad), ConfigError);
}

TEST_CASE("deterministic full-sample runs match the dense reference solver") {
    const Dataset d = gen_synthetic(SyntheticKind::blobs, 50, 0.5, 3);
    const double gamma = 0.5;
    SolverConfig cfg;
    cfg.epsilon = 1e-4;
    cfg.delta_min = 1e-4; // keep eta2 * delta_min = epsilon
    cfg.gamma_rbf = gamma;
    cfg.budget_mode = BudgetMode::steps;
    cfg.max_iters = 50000;
    const SolveResult w = wolfe_deterministic(d, cfg);
    CHECK(w.stop == StopReason::converged);
    for (const auto& rec : w.trajectory) {
        CHECK(rec.sample_size == 50);
        if (!std::isnan(rec.f_full))
            CHECK(rec.f_full == rec.f_sampled); // full sample: same objective
    }

    const DenseSolveResult ref = dense_reference_solve(d, gamma, 1e-7);
    CHECK(w.final_f_full ==
          doctest::Approx(ref.value).epsilon(2e-3));

    SolverConfig capped = cfg;
    capped.kernel_cap = 10;
    CHECK_THROWS_WITH_AS(wolfe_deterministic(d, capped),
                         doctest::Contains("full-SAA infeasible"), ConfigError);
}
