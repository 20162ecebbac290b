#ifndef SCSVM_DATASET_HPP_
#define SCSVM_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "scsvm/errors.hpp"

namespace scsvm {

using index_t = Eigen::Index;
// Rows are accessed far more often than columns (kernel evaluations), so
// features are stored row-major.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class DataFormat { csv, sparse_index_value };

struct LoadOptions {
    DataFormat format = DataFormat::csv;
    /// Label column as 0-based index, or by name when the file has a header.
    /// Ignored for the sparse format (label is always the leading token).
    int label_column = -1;                    // -1 means "last column" for csv
    std::string label_column_name;            // non-empty wins over label_column
    bool has_header = false;
    std::optional<int> id_column;             // csv column excluded from features
    /// Explicit raw-label mapping; when unset the two observed labels are
    /// ordered (numerically when both parse as numbers, else as strings) and
    /// the smaller one becomes -1.
    std::optional<std::pair<std::string, std::string>> label_map;  // {negative, positive}
    std::optional<index_t> num_features;      // sparse: overrides max-index inference
    std::optional<index_t> subsample_n;       // keep a seeded subsample of n rows
    std::uint64_t subsample_seed = 0;
};

/// Immutable after construction; safe to share across threads.
struct Dataset {
    FeatureMatrix features;           // m x p
    Eigen::VectorXd labels;           // entries are exactly -1 or +1
    std::vector<index_t> ids;         // stable row indices into the originally loaded data

    index_t rows() const { return features.rows(); }
    index_t cols() const { return features.cols(); }
};

Dataset load(const std::string& path, const LoadOptions& opts);

/// Deterministic disjoint split; test gets round(fraction * m) rows.
std::pair<Dataset, Dataset> split(const Dataset& d, double test_fraction, std::uint64_t seed);

/// Per-column z-score transform fitted on training data and applied to both
/// splits. Constant columns are mapped to all-zero.
class Standardizer {
public:
    static Standardizer fit(const FeatureMatrix& train_features);
    /// Rebuilds a fitted transform from persisted moments.
    static Standardizer from_moments(Eigen::VectorXd mean, Eigen::VectorXd stddev);

    void apply(FeatureMatrix& features) const;
    Dataset applied(const Dataset& d) const;
    Eigen::VectorXd transform_row(const Eigen::VectorXd& raw) const;

    const Eigen::VectorXd& mean() const { return mean_; }
    const Eigen::VectorXd& stddev() const { return std_; }

private:
    Eigen::VectorXd mean_;
    Eigen::VectorXd std_;   // sample std (n-1 denominator); 0 marks a constant column
};

/// Seeded without-replacement draws over a fixed index pool. The full draw
/// sequence is a permutation of the pool. One consumer per stream.
class SampleStream {
public:
    SampleStream(index_t pool_size, std::uint64_t seed);

    /// Returns min(count, remaining) fresh indices; empty means exhausted.
    std::vector<index_t> draw_next(index_t count);

    std::vector<index_t> drawn() const;
    std::vector<index_t> remaining() const;
    index_t remaining_count() const { return static_cast<index_t>(order_.size()) - cursor_; }

private:
    std::vector<index_t> order_;
    index_t cursor_ = 0;
};

/// Labels of the given rows, in row-list order.
Eigen::VectorXd labels_for(const Dataset& d, const std::vector<index_t>& rows);

} // namespace scsvm

#endif
