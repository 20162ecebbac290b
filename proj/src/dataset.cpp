#include "scsvm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "scsvm/rng.hpp"

namespace scsvm {

namespace {

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

[[noreturn]] void row_error(const std::string& path, std::size_t line_no, const std::string& what) {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + what);
}

/// Orders two raw labels: numeric comparison when both parse, else string.
bool label_less(const std::string& a, const std::string& b) {
    double da, db;
    if (parse_double(a, da) && parse_double(b, db)) return da < db;
    return a < b;
}

struct RawRows {
    std::vector<std::vector<double>> features;
    std::vector<std::string> raw_labels;
    index_t num_features = 0;
};

RawRows read_csv(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);

    RawRows rows;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    int label_col = opts.label_column;
    bool first_data_row = true;
    index_t arity = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && opts.has_header) {
            header = split_fields(line, ',');
            if (!opts.label_column_name.empty()) {
                auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) {
                    return trim(h) == opts.label_column_name;
                });
                if (it == header.end())
                    throw DataError(path + ": label column '" + opts.label_column_name + "' not found in header");
                label_col = static_cast<int>(it - header.begin());
            }
            continue;
        }
        if (trim(line).empty()) continue;

        auto fields = split_fields(line, ',');
        if (first_data_row) {
            arity = static_cast<index_t>(fields.size());
            if (label_col < 0) label_col = static_cast<int>(fields.size()) - 1;
            if (label_col >= static_cast<int>(fields.size()))
                throw DataError(path + ": label column index " + std::to_string(label_col) +
                                " out of range for " + std::to_string(fields.size()) + " columns");
            if (opts.id_column && (*opts.id_column < 0 || *opts.id_column >= static_cast<int>(fields.size())))
                throw DataError(path + ": id column index out of range");
            first_data_row = false;
        }
        if (static_cast<index_t>(fields.size()) != arity)
            row_error(path, line_no, "expected " + std::to_string(arity) + " fields, got " +
                                         std::to_string(fields.size()));

        std::vector<double> feat;
        feat.reserve(fields.size());
        for (int c = 0; c < static_cast<int>(fields.size()); ++c) {
            if (c == label_col) continue;
            if (opts.id_column && c == *opts.id_column) continue;
            double v;
            if (!parse_double(fields[c], v))
                row_error(path, line_no, "cannot parse numeric field '" + fields[c] + "'");
            if (!std::isfinite(v))
                row_error(path, line_no, "non-finite feature value");
            feat.push_back(v);
        }
        rows.features.push_back(std::move(feat));
        rows.raw_labels.push_back(trim(fields[label_col]));
    }
    if (rows.features.empty()) throw DataError(path + ": no data rows");
    rows.num_features = static_cast<index_t>(rows.features.front().size());
    return rows;
}

RawRows read_sparse(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);

    struct SparseRow {
        std::string label;
        std::vector<std::pair<index_t, double>> entries;  // 0-based
    };
    std::vector<SparseRow> parsed;
    index_t max_index = 0;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        SparseRow row;
        if (!(ss >> row.label)) row_error(path, line_no, "missing label");
        std::string tok;
        while (ss >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos)
                row_error(path, line_no, "expected index:value pair, got '" + tok + "'");
            long idx = 0;
            double val = 0.0;
            auto [p1, ec1] = std::from_chars(tok.data(), tok.data() + colon, idx);
            bool idx_ok = ec1 == std::errc() && p1 == tok.data() + colon;
            bool val_ok = parse_double(tok.substr(colon + 1), val);
            if (!idx_ok || !val_ok || idx < 1)
                row_error(path, line_no, "invalid index:value pair '" + tok + "'");
            if (!std::isfinite(val)) row_error(path, line_no, "non-finite feature value");
            row.entries.emplace_back(static_cast<index_t>(idx - 1), val);
            max_index = std::max(max_index, static_cast<index_t>(idx));
        }
        parsed.push_back(std::move(row));
    }
    if (parsed.empty()) throw DataError(path + ": no data rows");

    index_t p = opts.num_features.value_or(max_index);
    if (p < max_index)
        throw DataError(path + ": num_features=" + std::to_string(p) +
                        " smaller than largest index " + std::to_string(max_index));

    RawRows rows;
    rows.num_features = p;
    for (auto& r : parsed) {
        std::vector<double> feat(static_cast<std::size_t>(p), 0.0);
        for (auto& [i, v] : r.entries) feat[static_cast<std::size_t>(i)] = v;
        rows.features.push_back(std::move(feat));
        rows.raw_labels.push_back(r.label);
    }
    return rows;
}

Eigen::VectorXd map_labels(const std::vector<std::string>& raw, const LoadOptions& opts,
                           const std::string& path) {
    std::string neg, pos;
    if (opts.label_map) {
        neg = opts.label_map->first;
        pos = opts.label_map->second;
    } else {
        std::vector<std::string> distinct;
        for (const auto& l : raw)
            if (std::find(distinct.begin(), distinct.end(), l) == distinct.end()) distinct.push_back(l);
        if (distinct.size() > 2) {
            std::string seen;
            for (const auto& d : distinct) seen += (seen.empty() ? "" : ", ") + d;
            throw DataError(path + ": more than two label classes ({" + seen + "}); binary data required");
        }
        if (distinct.size() == 1)
            // A single class is allowed (degenerate but loadable); it maps to -1.
            distinct.push_back(distinct.front());
        std::sort(distinct.begin(), distinct.end(), label_less);
        neg = distinct.front();
        pos = distinct.back();
    }

    Eigen::VectorXd labels(static_cast<index_t>(raw.size()));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == neg)
            labels[static_cast<index_t>(i)] = -1.0;
        else if (raw[i] == pos)
            labels[static_cast<index_t>(i)] = 1.0;
        else
            throw DataError(path + ": label '" + raw[i] + "' outside the configured classes {" + neg +
                            ", " + pos + "}");
    }
    return labels;
}

} // namespace

Dataset load(const std::string& path, const LoadOptions& opts) {
    RawRows rows = opts.format == DataFormat::csv ? read_csv(path, opts) : read_sparse(path, opts);

    Dataset d;
    const index_t m = static_cast<index_t>(rows.features.size());
    d.features.resize(m, rows.num_features);
    for (index_t i = 0; i < m; ++i)
        for (index_t j = 0; j < rows.num_features; ++j)
            d.features(i, j) = rows.features[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    d.labels = map_labels(rows.raw_labels, opts, path);
    d.ids.resize(static_cast<std::size_t>(m));
    for (index_t i = 0; i < m; ++i) d.ids[static_cast<std::size_t>(i)] = i;

    if (opts.subsample_n && *opts.subsample_n < m) {
        std::mt19937_64 gen(rng::derive_seed(opts.subsample_seed, 0x5ab5));
        std::vector<index_t> order = d.ids;
        rng::shuffle(order, gen);
        order.resize(static_cast<std::size_t>(*opts.subsample_n));
        std::sort(order.begin(), order.end());
        Dataset sub;
        sub.features.resize(*opts.subsample_n, d.cols());
        sub.labels.resize(*opts.subsample_n);
        sub.ids.reserve(order.size());
        for (index_t i = 0; i < *opts.subsample_n; ++i) {
            sub.features.row(i) = d.features.row(order[static_cast<std::size_t>(i)]);
            sub.labels[i] = d.labels[order[static_cast<std::size_t>(i)]];
            sub.ids.push_back(order[static_cast<std::size_t>(i)]);
        }
        return sub;
    }
    return d;
}

std::pair<Dataset, Dataset> split(const Dataset& d, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw ConfigError("test fraction must be in (0,1), got " + std::to_string(test_fraction));

    const index_t m = d.rows();
    std::vector<index_t> order(static_cast<std::size_t>(m));
    for (index_t i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
    std::mt19937_64 gen(rng::derive_seed(seed, 0x5f17));
    rng::shuffle(order, gen);

    const index_t n_test = static_cast<index_t>(std::llround(test_fraction * static_cast<double>(m)));
    auto take = [&](index_t begin, index_t count) {
        Dataset part;
        part.features.resize(count, d.cols());
        part.labels.resize(count);
        part.ids.reserve(static_cast<std::size_t>(count));
        for (index_t i = 0; i < count; ++i) {
            index_t src = order[static_cast<std::size_t>(begin + i)];
            part.features.row(i) = d.features.row(src);
            part.labels[i] = d.labels[src];
            part.ids.push_back(d.ids[static_cast<std::size_t>(src)]);
        }
        return part;
    };
    Dataset test = take(0, n_test);
    Dataset train = take(n_test, m - n_test);
    return {std::move(train), std::move(test)};
}

Standardizer Standardizer::fit(const FeatureMatrix& train_features) {
    const index_t m = train_features.rows();
    const index_t p = train_features.cols();
    Standardizer s;
    s.mean_ = train_features.colwise().mean();
    s.std_.resize(p);
    for (index_t j = 0; j < p; ++j) {
        double var = 0.0;
        if (m > 1) {
            for (index_t i = 0; i < m; ++i) {
                double c = train_features(i, j) - s.mean_[j];
                var += c * c;
            }
            var /= static_cast<double>(m - 1);
        }
        double sd = std::sqrt(var);
        s.std_[j] = sd < 1e-12 * (1.0 + std::abs(s.mean_[j])) ? 0.0 : sd;
    }
    return s;
}

Standardizer Standardizer::from_moments(Eigen::VectorXd mean, Eigen::VectorXd stddev) {
    if (mean.size() != stddev.size())
        throw ConfigError("standardizer: mean/stddev size mismatch");
    if (!mean.allFinite() || !stddev.allFinite() || (stddev.array() < 0.0).any())
        throw ConfigError("standardizer: moments must be finite with nonnegative stddev");
    Standardizer s;
    s.mean_ = std::move(mean);
    s.std_ = std::move(stddev);
    return s;
}

void Standardizer::apply(FeatureMatrix& features) const {
    for (index_t j = 0; j < features.cols(); ++j) {
        if (std_[j] == 0.0)
            features.col(j).setZero();
        else
            features.col(j) = (features.col(j).array() - mean_[j]) / std_[j];
    }
}

Dataset Standardizer::applied(const Dataset& d) const {
    Dataset out = d;
    apply(out.features);
    return out;
}

Eigen::VectorXd Standardizer::transform_row(const Eigen::VectorXd& raw) const {
    Eigen::VectorXd out(raw.size());
    for (index_t j = 0; j < raw.size(); ++j)
        out[j] = std_[j] == 0.0 ? 0.0 : (raw[j] - mean_[j]) / std_[j];
    return out;
}

SampleStream::SampleStream(index_t pool_size, std::uint64_t seed) {
    order_.resize(static_cast<std::size_t>(pool_size));
    for (index_t i = 0; i < pool_size; ++i) order_[static_cast<std::size_t>(i)] = i;
    std::mt19937_64 gen(seed);
    rng::shuffle(order_, gen);
}

std::vector<index_t> SampleStream::draw_next(index_t count) {
    if (count < 1) throw ConfigError("draw count must be >= 1, got " + std::to_string(count));
    const index_t take = std::min(count, remaining_count());
    std::vector<index_t> out(order_.begin() + cursor_, order_.begin() + cursor_ + take);
    cursor_ += take;
    return out;
}

std::vector<index_t> SampleStream::drawn() const {
    return {order_.begin(), order_.begin() + cursor_};
}

std::vector<index_t> SampleStream::remaining() const {
    return {order_.begin() + cursor_, order_.end()};
}

Eigen::VectorXd labels_for(const Dataset& d, const std::vector<index_t>& rows) {
    Eigen::VectorXd out(static_cast<index_t>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= d.rows())
            throw ConfigError("row index " + std::to_string(rows[i]) + " out of range");
        out[static_cast<index_t>(i)] = d.labels[rows[i]];
    }
    return out;
}

} // namespace scsvm
