#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "helpers.hpp"
#include "scsvm/errors.hpp"
#include "scsvm/kernel.hpp"

using namespace scsvm;

TEST_CASE("rbf basics") {
    std::mt19937_64 gen(2);
    const Eigen::VectorXd x = testing::random_vector(gen, 5);
    const Eigen::VectorXd y = testing::random_vector(gen, 5);

    CHECK(rbf(x, x, 0.7) == 1.0);
    CHECK(rbf(x, y, 0.7) == rbf(y, x, 0.7));
    CHECK(rbf(x, y, 0.7) > 0.0);
    CHECK(rbf(x, y, 0.7) < 1.0);

    Eigen::VectorXd a(1), b(1);
    a << 0.0;
    b << 1.0;
    CHECK(rbf(a, b, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(rbf(a, b, 1.0) == doctest::Approx(0.367879).epsilon(1e-5));

    Eigen::VectorXd c(2);
    c << 0.0, 0.0;
    CHECK_THROWS_AS(rbf(a, c, 1.0), ConfigError);
    CHECK_THROWS_AS(rbf(a, b, 0.0), ConfigError);
}

TEST_CASE("default bandwidth is 1/(p var), 1/p for constant features") {
    FeatureMatrix f(3, 2);
    f << 0.0, 0.0, 1.0, 1.0, 2.0, 2.0;
    // pooled population variance of all entries: mean of squared deviations
    const double var = (f.array() - f.mean()).square().mean();
    CHECK(default_rbf_gamma(f) == doctest::Approx(1.0 / (2.0 * var)).epsilon(1e-12));

    FeatureMatrix c = FeatureMatrix::Constant(4, 3, 2.5);
    CHECK(default_rbf_gamma(c) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("gram matrix: symmetric, unit diagonal, append-only growth") {
    std::mt19937_64 gen(21);
    const Dataset d = testing::random_dataset(gen, 12, 3);
    GrowingKernel k(0.5, 100);
    k.extend({0, 1}, d);
    REQUIRE(k.size() == 2);
    const Eigen::MatrixXd before = k.gram();

    k.extend({}, d);
    CHECK(testing::exact_equal(k.gram(), before));

    k.extend({5}, d);
    REQUIRE(k.size() == 3);
    CHECK(testing::exact_equal(k.gram().topLeftCorner(2, 2), before));

    const Eigen::MatrixXd& g = k.gram();
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    for (index_t i = 0; i < g.rows(); ++i)
        CHECK(g(i, i) == 1.0);
    CHECK(k.active_rows() == std::vector<index_t>{0, 1, 5});
}

TEST_CASE("grown gram equals a from-scratch rebuild") {
    std::mt19937_64 gen(33);
    const Dataset d = testing::random_dataset(gen, 60, 4);
    GrowingKernel grown(0.3, 100);
    std::vector<index_t> order;
    for (const auto& batch : std::vector<std::vector<index_t>>{
             {7, 2}, {41, 3, 19}, {0}, {55, 23, 11, 38}, {9, 58}}) {
        grown.extend(batch, d);
        order.insert(order.end(), batch.begin(), batch.end());
    }
    GrowingKernel rebuilt(0.3, 100);
    rebuilt.extend(order, d);
    CHECK((grown.gram() - rebuilt.gram()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(grown.active_rows() == rebuilt.active_rows());
}

TEST_CASE("extension order only permutes rows and columns") {
    std::mt19937_64 gen(17);
    const Dataset d = testing::random_dataset(gen, 10, 2);
    GrowingKernel a(0.4, 20), b(0.4, 20);
    a.extend({0, 1, 2, 3}, d);
    b.extend({3, 1}, d);
    b.extend({0, 2}, d);

    // Map b's ordering onto a's and compare entries.
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const auto ai = static_cast<index_t>(
                std::find(a.active_rows().begin(), a.active_rows().end(), b.active_rows()[i]) -
                a.active_rows().begin());
            const auto aj = static_cast<index_t>(
                std::find(a.active_rows().begin(), a.active_rows().end(), b.active_rows()[j]) -
                a.active_rows().begin());
            CHECK(b.gram()(static_cast<index_t>(i), static_cast<index_t>(j)) ==
                  a.gram()(ai, aj));
        }
    }
}

TEST_CASE("extend rejects duplicates and enforces the cap") {
    std::mt19937_64 gen(8);
    const Dataset d = testing::random_dataset(gen, 10, 2);
    GrowingKernel k(1.0, 3);
    k.extend({1, 2}, d);
    CHECK_THROWS_AS(k.extend({2}, d), ConfigError);
    CHECK_THROWS_AS(k.extend({3, 4}, d), ConfigError); // would exceed cap 3
    CHECK_THROWS_AS(k.extend({4, 4}, d), ConfigError); // duplicate within the batch
    CHECK(k.size() == 2);                              // failed extends leave no residue
}

TEST_CASE("cross_rows against active rows reproduces the gram matrix") {
    std::mt19937_64 gen(44);
    const Dataset d = testing::random_dataset(gen, 15, 3);
    GrowingKernel k(0.8, 20);
    k.extend({3, 7, 1, 12}, d);

    const Eigen::MatrixXd self = k.cross_rows(k.active_rows(), d);
    CHECK((self - k.gram()).cwiseAbs().maxCoeff() <= 1e-12);

    const Eigen::MatrixXd one = k.cross_rows({7}, d);
    CHECK(one.rows() == 1);
    CHECK(one(0, 1) == 1.0); // row 7 sits at active position 1

    const Eigen::MatrixXd q = k.cross_rows({0, 9}, d);
    for (index_t i = 0; i < q.rows(); ++i)
        for (index_t j = 0; j < q.cols(); ++j) {
            const index_t row = i == 0 ? 0 : 9;
            const double direct = rbf(d.features.row(row), d.features.row(k.active_rows()[j]),
                                      k.gamma());
            CHECK(std::abs(q(i, j) - direct) <= 1e-12);
        }

    CHECK_THROWS_AS(k.cross_rows({15}, d), ConfigError);
}

TEST_CASE("gram matrices are positive semidefinite up to tolerance") {
    std::mt19937_64 gen(55);
    const Dataset d = testing::random_dataset(gen, 120, 5);
    const GrowingKernel k = testing::full_kernel(d, 0.6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k.gram());
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("binary dump round-trips") {
    std::mt19937_64 gen(66);
    const Dataset d = testing::random_dataset(gen, 8, 2);
    GrowingKernel k(0.9, 10);
    k.extend({0, 3, 5}, d);
    const auto path = (std::filesystem::temp_directory_path() / "gram.bin").string();
    k.dump(path);
    double gamma = 0.0;
    const Eigen::MatrixXd back = GrowingKernel::load_dump(path, &gamma);
    CHECK(gamma == 0.9);
    CHECK(testing::exact_equal(back, k.gram()));
}
