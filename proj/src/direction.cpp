#include "scsvm/direction.hpp"

#include <algorithm>

#include "scsvm/errors.hpp"

namespace scsvm {

DirectionStep min_norm_direction(const Eigen::VectorXd& d_prev, const Eigen::VectorXd& g) {
    if (d_prev.size() != g.size())
        throw ConfigError("min_norm_direction: d_prev/g size mismatch");
    if (!d_prev.allFinite() || !g.allFinite())
        throw ConfigError("min_norm_direction: non-finite input");

    // The segment is { g + lambda * u : lambda in [0, 1] } with u = -d_prev - g.
    const Eigen::VectorXd u = -d_prev - g;
    const double uu = u.squaredNorm();
    DirectionStep out;
    if (uu == 0.0) {
        out.lambda = 0.0;
        out.d = -g;
        return out;
    }
    out.lambda = std::clamp(-g.dot(u) / uu, 0.0, 1.0);
    out.d = -(g + out.lambda * u);
    return out;
}

Eigen::VectorXd pad(const Eigen::VectorXd& v, index_t size) {
    if (size < v.size())
        throw ConfigError("pad: target size smaller than input");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size);
    out.head(v.size()) = v;
    return out;
}

} // namespace scsvm
