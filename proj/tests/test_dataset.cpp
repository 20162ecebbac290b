#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "helpers.hpp"
#include "scsvm/dataset.hpp"
#include "scsvm/errors.hpp"

using namespace scsvm;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

} // namespace

TEST_CASE("csv load remaps labels, smaller raw label to -1") {
    const auto path = write_temp("ds_basic.csv", "1.0,2.0,0\n3.0,4.0,1\n5.0,6.0,0\n");
    const Dataset d = load(path, {});
    REQUIRE(d.rows() == 3);
    REQUIRE(d.cols() == 2);
    CHECK(d.labels[0] == -1.0);
    CHECK(d.labels[1] == 1.0);
    CHECK(d.labels[2] == -1.0);
    CHECK(d.features(1, 0) == 3.0);
    CHECK(d.ids == std::vector<index_t>{0, 1, 2});
}

TEST_CASE("csv label ordering is numeric when both labels parse as numbers") {
    // String ordering would put "10" before "2".
    const auto path = write_temp("ds_numeric.csv", "1,10\n2,2\n");
    const Dataset d = load(path, {});
    CHECK(d.labels[0] == 1.0);  // 10 is the larger class
    CHECK(d.labels[1] == -1.0); // 2 is the smaller class
}

TEST_CASE("csv header, named label column and id column") {
    const auto path = write_temp("ds_header.csv", "id,f1,diagnosis,f2\n7,0.5,M,1.5\n8,0.25,B,2.5\n");
    LoadOptions opts;
    opts.has_header = true;
    opts.label_column_name = "diagnosis";
    opts.id_column = 0;
    const Dataset d = load(path, opts);
    REQUIRE(d.cols() == 2);
    CHECK(d.features(0, 0) == 0.5);
    CHECK(d.features(0, 1) == 1.5);
    CHECK(d.labels[0] == 1.0);  // M > B lexicographically
    CHECK(d.labels[1] == -1.0);
    CHECK(d.ids == std::vector<index_t>{0, 1});
}

TEST_CASE("explicit label map overrides the default ordering") {
    const auto path = write_temp("ds_map.csv", "1,pos\n2,neg\n");
    LoadOptions opts;
    opts.label_map = {{"pos", "neg"}};
    const Dataset d = load(path, opts);
    CHECK(d.labels[0] == -1.0);
    CHECK(d.labels[1] == 1.0);
}

TEST_CASE("sparse format: label leads, index:value pairs are 1-based") {
    const auto path = write_temp("ds_sparse.txt", "+1 1:0.5 3:2.0\n-1 2:1.25\n");
    LoadOptions opts;
    opts.format = DataFormat::sparse_index_value;
    opts.num_features = 3;
    const Dataset d = load(path, opts);
    REQUIRE(d.rows() == 2);
    REQUIRE(d.cols() == 3);
    CHECK(d.features(0, 0) == 0.5);
    CHECK(d.features(0, 1) == 0.0);
    CHECK(d.features(0, 2) == 2.0);
    CHECK(d.labels[0] == 1.0);
    CHECK(d.features(1, 1) == 1.25);
    CHECK(d.labels[1] == -1.0);
}

TEST_CASE("sparse feature count inferred from the largest index") {
    const auto path = write_temp("ds_sparse_infer.txt", "+1 4:1.0\n-1 2:3.0\n");
    LoadOptions opts;
    opts.format = DataFormat::sparse_index_value;
    const Dataset d = load(path, opts);
    CHECK(d.cols() == 4);
}

TEST_CASE("load errors carry context") {
    SUBCASE("ragged csv row reports its line number") {
        const auto path = write_temp("ds_ragged.csv", "1,2,0\n3,1\n");
        CHECK_THROWS_WITH_AS(load(path, {}), doctest::Contains(":2:"), DataError);
    }
    SUBCASE("empty file") {
        const auto path = write_temp("ds_empty.csv", "");
        CHECK_THROWS_AS(load(path, {}), DataError);
    }
    SUBCASE("more than two label classes") {
        const auto path = write_temp("ds_triple.csv", "1,a\n2,b\n3,c\n");
        CHECK_THROWS_WITH_AS(load(path, {}), doctest::Contains("binary"), DataError);
    }
    SUBCASE("label outside the configured classes") {
        const auto path = write_temp("ds_outside.csv", "1,a\n2,b\n");
        LoadOptions opts;
        opts.label_map = {{"a", "c"}};
        CHECK_THROWS_AS(load(path, opts), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load("/nonexistent/nope.csv", {}), DataError);
    }
}

TEST_CASE("reloading the same file yields identical contents") {
    const auto path = write_temp("ds_reload.csv", "0.125,2.5,0\n-3.75,4.0,1\n");
    const Dataset a = load(path, {});
    const Dataset b = load(path, {});
    CHECK(testing::exact_equal(a.features, b.features));
    CHECK(testing::exact_equal(a.labels, b.labels));
    CHECK(a.ids == b.ids);
}

TEST_CASE("seeded subsample keeps exactly n rows deterministically") {
    std::string content;
    for (int i = 0; i < 20; ++i)
        content += std::to_string(i) + ",0\n" + std::to_string(100 + i) + ",1\n";
    const auto path = write_temp("ds_sub.csv", content);
    LoadOptions opts;
    opts.subsample_n = 7;
    opts.subsample_seed = 3;
    const Dataset a = load(path, opts);
    const Dataset b = load(path, opts);
    CHECK(a.rows() == 7);
    CHECK(testing::exact_equal(a.features, b.features));
    CHECK(a.ids == b.ids);
}

TEST_CASE("split: sizes, determinism, disjoint and exhaustive") {
    std::mt19937_64 gen(11);
    const Dataset d = testing::random_dataset(gen, 10, 3);
    const auto [train, test] = split(d, 0.3, 42);
    CHECK(train.rows() == 7);
    CHECK(test.rows() == 3);

    const auto [train2, test2] = split(d, 0.3, 42);
    CHECK(testing::exact_equal(train.features, train2.features));
    CHECK(test.ids == test2.ids);

    std::set<index_t> seen(train.ids.begin(), train.ids.end());
    seen.insert(test.ids.begin(), test.ids.end());
    CHECK(seen.size() == 10);
}

TEST_CASE("split rejects out-of-range fractions") {
    std::mt19937_64 gen(1);
    const Dataset d = testing::random_dataset(gen, 10, 2);
    CHECK_THROWS_AS(split(d, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(split(d, 1.0, 1), ConfigError);
}

TEST_CASE("two split seeds give different partitions on m=100") {
    std::mt19937_64 gen(5);
    const Dataset d = testing::random_dataset(gen, 100, 2);
    const auto [a_train, a_test] = split(d, 0.2, 1);
    const auto [b_train, b_test] = split(d, 0.2, 2);
    CHECK(a_test.ids != b_test.ids);
}

TEST_CASE("standardizer: near-zero means, unit stds, constant columns zeroed") {
    std::mt19937_64 gen(7);
    Dataset d = testing::random_dataset(gen, 50, 3, 4.0);
    d.features.col(2).setConstant(9.0);
    const Standardizer s = Standardizer::fit(d.features);
    FeatureMatrix f = d.features;
    s.apply(f);
    for (index_t j = 0; j < 2; ++j) {
        CHECK(std::abs(f.col(j).mean()) < 1e-9);
        const double var = (f.col(j).array() - f.col(j).mean()).square().sum() / (f.rows() - 1);
        CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
    }
    CHECK(f.col(2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.stddev()[2] == 0.0);
}

TEST_CASE("standardizer round-trips through persisted moments") {
    std::mt19937_64 gen(13);
    const Dataset d = testing::random_dataset(gen, 30, 4, 2.0);
    const Standardizer s = Standardizer::fit(d.features);
    const Standardizer r = Standardizer::from_moments(s.mean(), s.stddev());
    const Eigen::VectorXd row = d.features.row(17);
    CHECK(testing::exact_equal(s.transform_row(row), r.transform_row(row)));

    FeatureMatrix a = d.features;
    s.apply(a);
    CHECK(testing::exact_equal(Eigen::VectorXd(a.row(17)), s.transform_row(row)));
}

TEST_CASE("standardizer rejects malformed moments") {
    CHECK_THROWS_AS(Standardizer::from_moments(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
                    ConfigError);
    Eigen::VectorXd bad(1);
    bad << -1.0;
    CHECK_THROWS_AS(Standardizer::from_moments(Eigen::VectorXd::Zero(1), bad), ConfigError);
}

TEST_CASE("sample stream draws without replacement until exhaustion") {
    SampleStream s(5, 99);
    const auto first = s.draw_next(3);
    const auto second = s.draw_next(3);
    CHECK(first.size() == 3);
    CHECK(second.size() == 2); // pool exhausted, short draw
    CHECK(s.draw_next(1).empty());
    CHECK(s.remaining_count() == 0);

    std::set<index_t> all(first.begin(), first.end());
    all.insert(second.begin(), second.end());
    CHECK(all == std::set<index_t>{0, 1, 2, 3, 4});
}

TEST_CASE("sample stream rejects a zero draw") {
    SampleStream s(5, 1);
    CHECK_THROWS_AS(s.draw_next(0), ConfigError);
}

TEST_CASE("equal seeds give equal streams; drawn/remaining partition the pool") {
    SampleStream a(20, 4), b(20, 4);
    CHECK(a.draw_next(8) == b.draw_next(8));
    CHECK(a.draw_next(5) == b.draw_next(5));

    const auto drawn = a.drawn();
    const auto rest = a.remaining();
    CHECK(drawn.size() == 13);
    CHECK(rest.size() == 7);
    std::set<index_t> all(drawn.begin(), drawn.end());
    all.insert(rest.begin(), rest.end());
    CHECK(all.size() == 20);
}

TEST_CASE("full draw sequence is a permutation of the pool") {
    SampleStream s(17, 123);
    std::vector<index_t> seq;
    for (;;) {
        const auto batch = s.draw_next(4);
        if (batch.empty())
            break;
        seq.insert(seq.end(), batch.begin(), batch.end());
    }
    std::sort(seq.begin(), seq.end());
    std::vector<index_t> expect(17);
    std::iota(expect.begin(), expect.end(), index_t{0});
    CHECK(seq == expect);
}

TEST_CASE("labels_for returns labels in row-list order") {
    std::mt19937_64 gen(3);
    const Dataset d = testing::random_dataset(gen, 6, 2);
    const Eigen::VectorXd l = labels_for(d, {4, 0, 2});
    CHECK(l[0] == d.labels[4]);
    CHECK(l[1] == d.labels[0]);
    CHECK(l[2] == d.labels[2]);
    CHECK_THROWS_AS(labels_for(d, {6}), ConfigError);
}
