#ifndef SCSVM_TESTS_HELPERS_HPP_
#define SCSVM_TESTS_HELPERS_HPP_

#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "scsvm/dataset.hpp"
#include "scsvm/kernel.hpp"
#include "scsvm/rng.hpp"

namespace scsvm::testing {

/// Bitwise matrix/vector equality (Eigen's == is coefficient-wise).
template <typename A, typename B>
bool exact_equal(const A& a, const B& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

inline Eigen::VectorXd random_vector(std::mt19937_64& gen, index_t n, double scale = 1.0) {
    Eigen::VectorXd v(n);
    for (index_t i = 0; i < n; ++i)
        v[i] = scale * rng::normal(gen);
    return v;
}

inline Dataset random_dataset(std::mt19937_64& gen, index_t m, index_t p, double scale = 1.0) {
    Dataset d;
    d.features.resize(m, p);
    d.labels.resize(m);
    d.ids.resize(static_cast<std::size_t>(m));
    for (index_t i = 0; i < m; ++i) {
        for (index_t j = 0; j < p; ++j)
            d.features(i, j) = scale * rng::normal(gen);
        d.labels[i] = rng::uniform_unit(gen) < 0.5 ? -1.0 : 1.0;
        d.ids[static_cast<std::size_t>(i)] = i;
    }
    return d;
}

/// Kernel over every row of d, in row order.
inline GrowingKernel full_kernel(const Dataset& d, double gamma) {
    GrowingKernel k(gamma, d.rows());
    std::vector<index_t> all(static_cast<std::size_t>(d.rows()));
    std::iota(all.begin(), all.end(), index_t{0});
    k.extend(all, d);
    return k;
}

} // namespace scsvm::testing

#endif
