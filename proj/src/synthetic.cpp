#include "scsvm/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "scsvm/errors.hpp"
#include "scsvm/rng.hpp"

namespace scsvm {

SyntheticKind synthetic_kind_from(const std::string& name) {
    if (name == "blobs")
        return SyntheticKind::blobs;
    if (name == "moons" || name == "moons-like")
        return SyntheticKind::moons_like;
    throw ConfigError("unknown synthetic kind: " + name);
}

Dataset gen_synthetic(SyntheticKind kind, index_t m, double noise, std::uint64_t seed) {
    if (m < 4)
        throw ConfigError("gen_synthetic: m must be at least 4");
    if (!(noise >= 0.0))
        throw ConfigError("gen_synthetic: noise must be nonnegative");

    Dataset d;
    d.features.resize(m, 2);
    d.labels.resize(m);
    d.ids.resize(static_cast<std::size_t>(m));
    std::iota(d.ids.begin(), d.ids.end(), index_t{0});

    std::mt19937_64 gen(rng::derive_seed(seed, 0x5e6eULL));
    for (index_t i = 0; i < m; ++i) {
        const bool positive = i % 2 == 0; // interleaved so every prefix is balanced
        double x = 0.0;
        double y = 0.0;
        switch (kind) {
        case SyntheticKind::blobs: {
            const double cx = positive ? 2.0 : -2.0;
            x = cx + noise * rng::normal(gen);
            y = cx + noise * rng::normal(gen);
            break;
        }
        case SyntheticKind::moons_like: {
            const double theta = M_PI * rng::uniform_unit(gen);
            if (positive) {
                x = std::cos(theta);
                y = std::sin(theta);
            } else {
                x = 1.0 - std::cos(theta);
                y = 0.5 - std::sin(theta);
            }
            x += noise * rng::normal(gen);
            y += noise * rng::normal(gen);
            break;
        }
        }
        d.features(i, 0) = x;
        d.features(i, 1) = y;
        d.labels[i] = positive ? 1.0 : -1.0;
    }
    return d;
}

} // namespace scsvm
