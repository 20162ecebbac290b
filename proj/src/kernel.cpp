#include "scsvm/kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_set>

namespace scsvm {

double rbf(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double gamma) {
    if (x.size() != y.size())
        throw ConfigError("rbf: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
    if (!(gamma > 0.0)) throw ConfigError("rbf: gamma must be positive");
    return std::exp(-gamma * (x - y).squaredNorm());
}

double default_rbf_gamma(const FeatureMatrix& train_features) {
    const double p = static_cast<double>(train_features.cols());
    const auto flat = train_features.reshaped();
    const double mean = flat.mean();
    const double var = (flat.array() - mean).square().mean();
    if (var <= 0.0) return 1.0 / p;
    return 1.0 / (p * var);
}

GrowingKernel::GrowingKernel(double gamma, index_t max_active)
    : gamma_(gamma), max_active_(max_active), gram_(0, 0) {
    if (!(gamma > 0.0)) throw ConfigError("kernel gamma must be positive");
    if (max_active < 1) throw ConfigError("kernel cap must be positive");
}

void GrowingKernel::extend(const std::vector<index_t>& new_rows, const Dataset& data) {
    if (new_rows.empty()) return;

    std::unordered_set<index_t> seen(active_.begin(), active_.end());
    for (index_t r : new_rows) {
        if (r < 0 || r >= data.rows())
            throw ConfigError("kernel extend: row " + std::to_string(r) + " out of range");
        if (!seen.insert(r).second)
            throw ConfigError("kernel extend: duplicate row " + std::to_string(r));
    }
    const index_t old_n = size();
    const index_t new_n = old_n + static_cast<index_t>(new_rows.size());
    if (new_n > max_active_)
        throw ConfigError("kernel extend: active-set cap " + std::to_string(max_active_) + " exceeded");

    // conservativeResize copies the old block verbatim.
    gram_.conservativeResize(new_n, new_n);
    active_.insert(active_.end(), new_rows.begin(), new_rows.end());

    for (index_t j = old_n; j < new_n; ++j) {
        const auto xj = data.features.row(active_[static_cast<std::size_t>(j)]).transpose();
        for (index_t i = 0; i <= j; ++i) {
            const auto xi = data.features.row(active_[static_cast<std::size_t>(i)]).transpose();
            const double v = rbf(xi, xj, gamma_);
            gram_(i, j) = v;
            gram_(j, i) = v;
        }
    }
}

Eigen::MatrixXd GrowingKernel::cross_rows(const std::vector<index_t>& query_rows,
                                          const Dataset& data) const {
    Eigen::MatrixXd out(static_cast<index_t>(query_rows.size()), size());
    for (std::size_t j = 0; j < query_rows.size(); ++j) {
        if (query_rows[j] < 0 || query_rows[j] >= data.rows())
            throw ConfigError("cross_rows: row " + std::to_string(query_rows[j]) + " out of range");
        const auto q = data.features.row(query_rows[j]).transpose();
        for (index_t i = 0; i < size(); ++i) {
            const auto a = data.features.row(active_[static_cast<std::size_t>(i)]).transpose();
            out(static_cast<index_t>(j), i) = rbf(q, a, gamma_);
        }
    }
    return out;
}

namespace {

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xff);
    return r;
}

void write_u64(std::ofstream& out, std::uint64_t v) {
    const std::uint64_t le = to_le(v);
    out.write(reinterpret_cast<const char*>(&le), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return to_le(v);
}

} // namespace

void GrowingKernel::dump(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    write_u64(out, static_cast<std::uint64_t>(size()));
    write_u64(out, std::bit_cast<std::uint64_t>(gamma_));
    for (index_t i = 0; i < size(); ++i)
        for (index_t j = 0; j < size(); ++j)
            write_u64(out, std::bit_cast<std::uint64_t>(gram_(i, j)));
    if (!out) throw DataError("short write to '" + path + "'");
}

Eigen::MatrixXd GrowingKernel::load_dump(const std::string& path, double* gamma_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    const auto n = static_cast<index_t>(read_u64(in));
    const double gamma = std::bit_cast<double>(read_u64(in));
    if (gamma_out) *gamma_out = gamma;
    Eigen::MatrixXd g(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j)
            g(i, j) = std::bit_cast<double>(read_u64(in));
    if (!in) throw DataError("truncated kernel dump '" + path + "'");
    return g;
}

} // namespace scsvm
