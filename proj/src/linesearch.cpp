#include "scsvm/linesearch.hpp"

#include <cmath>
#include <limits>

#include "scsvm/errors.hpp"

namespace scsvm {

void LineSearchParams::validate() const {
    if (!(m1 >= 0.25 && m1 < 0.5))
        throw ConfigError("line search: m1 must lie in [0.25, 0.5)");
    if (!(m2 >= 0.25 && m2 < m1))
        throw ConfigError("line search: m2 must lie in [0.25, m1)");
    if (n <= 1)
        throw ConfigError("line search: n must exceed 1");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ConfigError("line search: delta must be positive and finite");
    if (max_bisections < 1)
        throw ConfigError("line search: max_bisections must be at least 1");
}

namespace {

StepQuery classify_at(const SampledObjective& obj, const Eigen::VectorXd& alpha_hat, double f0,
                      const Eigen::VectorXd& d, double dnorm2, double t,
                      const LineSearchParams& p, int& evals) {
    StepQuery q;
    q.t = t;
    const Eigen::VectorXd x = alpha_hat + t * d;
    const double fx = obj.value(x);
    if (!std::isfinite(fx))
        throw DataError("line search: non-finite objective value at trial step");
    q.f_delta = fx - f0;
    q.dir_deriv = obj.subgradient(x).dot(d);
    if (!std::isfinite(q.dir_deriv))
        throw DataError("line search: non-finite directional derivative at trial step");
    q.in_l = q.f_delta <= -p.m1 * dnorm2 * t;
    q.in_r = q.dir_deriv < 0.0 && q.dir_deriv >= -p.m2 * dnorm2;
    ++evals;
    return q;
}

} // namespace

StepQuery classify(const SampledObjective& obj, const Eigen::VectorXd& alpha_hat,
                   const Eigen::VectorXd& d, double t, const LineSearchParams& p) {
    p.validate();
    if (!(t > 0.0))
        throw ConfigError("classify: t must be positive");
    const double dnorm2 = d.squaredNorm();
    if (!(dnorm2 > 0.0))
        throw ConfigError("classify: direction is zero");
    int evals = 0;
    return classify_at(obj, alpha_hat, obj.value(alpha_hat), d, dnorm2, t, p, evals);
}

LineSearchResult search(const SampledObjective& obj, const Eigen::VectorXd& alpha_hat,
                        const Eigen::VectorXd& d, const LineSearchParams& p) {
    p.validate();
    const double dnorm2 = d.squaredNorm();
    const double dnorm = std::sqrt(dnorm2);
    if (!(dnorm > 0.0))
        throw ConfigError("search: direction is zero");

    // Gram products are linear along the ray, Q(a + t d) = Qa + t Qd, so two
    // matvecs up front make every probe O(n). classify() keeps the direct
    // evaluation path, which doubles as an independent check on this one.
    const Eigen::MatrixXd& gram = obj.kernel().gram();
    const Eigen::VectorXd& w = obj.labels();
    const index_t nn = w.size();
    if (alpha_hat.size() != nn || d.size() != nn)
        throw ConfigError("search: dimension mismatch against the objective");
    if (!alpha_hat.allFinite() || !d.allFinite())
        throw ConfigError("search: non-finite base point or direction");
    const Eigen::VectorXd qx = gram * alpha_hat;
    const Eigen::VectorXd qd = gram * d;
    const double xqx = alpha_hat.dot(qx);
    const double xqd = alpha_hat.dot(qd); // equals d.dot(qx); Q is symmetric
    const double dqd = d.dot(qd);
    const double inv_n = 1.0 / static_cast<double>(nn);

    double h0 = 0.0;
    for (index_t i = 0; i < nn; ++i)
        h0 += std::max(0.0, 1.0 - w[i] * qx[i]);
    const double f0 = 0.5 * xqx + h0 * inv_n;
    if (!std::isfinite(f0))
        throw DataError("line search: non-finite objective value at base point");
    const double b = p.b();

    LineSearchResult res;
    res.evals = 1; // the base evaluation
    res.f_base = f0;
    res.f_step = f0;

    double best_l_t = 0.0;
    double best_l_fdelta = std::numeric_limits<double>::infinity();
    auto probe = [&](double t) {
        StepQuery q;
        q.t = t;
        double hinge = 0.0;
        double coef_qd = 0.0; // sum over active hinge rows of -w_i (Qd)_i
        for (index_t i = 0; i < nn; ++i) {
            const double margin = w[i] * (qx[i] + t * qd[i]);
            if (margin < 1.0) {
                hinge += 1.0 - margin;
                coef_qd -= w[i] * qd[i];
            }
        }
        const double fx = 0.5 * (xqx + 2.0 * t * xqd + t * t * dqd) + hinge * inv_n;
        if (!std::isfinite(fx))
            throw DataError("line search: non-finite objective value at trial step");
        q.f_delta = fx - f0;
        q.dir_deriv = xqd + t * dqd + coef_qd * inv_n;
        if (!std::isfinite(q.dir_deriv))
            throw DataError("line search: non-finite directional derivative at trial step");
        q.in_l = q.f_delta <= -p.m1 * dnorm2 * t;
        q.in_r = q.dir_deriv < 0.0 && q.dir_deriv >= -p.m2 * dnorm2;
        ++res.evals;
        if (q.in_l && q.f_delta < best_l_fdelta) {
            best_l_fdelta = q.f_delta;
            best_l_t = q.t;
        }
        return q;
    };

    double t = p.delta / (2.0 * dnorm);
    StepQuery q = probe(t);
    res.initial_neither = !q.in_l && !q.in_r;
    if (q.in_l && q.in_r) {
        res.t = t;
        res.exit = SearchExit::interior;
        res.f_step = f0 + q.f_delta;
        return res;
    }

    double lo = 0.0; // bracket left end, always in L
    double hi = 0.0;
    if (q.in_l) {
        // Doubling: grow while the step stays in L \ R and within the radius.
        for (;;) {
            const double prev = t;
            t *= 2.0;
            if (t * dnorm > p.delta) {
                // q still describes prev, the last in-L trial.
                res.t = prev;
                res.exit = SearchExit::boundary_half;
                res.f_step = f0 + q.f_delta;
                return res;
            }
            q = probe(t);
            if (q.in_l && q.in_r) {
                res.t = t;
                res.exit = SearchExit::interior;
                res.f_step = f0 + q.f_delta;
                return res;
            }
            if (q.in_l)
                continue;
            lo = prev;
            hi = t;
            break;
        }
    } else {
        // Halving: shrink until L is entered or the step falls below b. A
        // trial outside both sets counts as overlong and keeps shrinking.
        for (;;) {
            const double prev = t;
            t *= 0.5;
            q = probe(t);
            if (q.in_l) {
                if (q.in_r) {
                    res.t = t;
                    res.exit = SearchExit::interior;
                    res.f_step = f0 + q.f_delta;
                    return res;
                }
                lo = t;
                hi = prev;
                break;
            }
            if (t * dnorm < b) {
                res.t = 0.0;
                res.exit = SearchExit::collapse;
                res.witness_t = t;
                return res;
            }
        }
    }

    // Bisection on [lo, hi]: the midpoint joins the bracket on the side that
    // keeps the left end in L.
    for (int i = 0; i < p.max_bisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi))
            break;
        q = probe(mid);
        if (q.in_l && q.in_r) {
            res.t = mid;
            res.exit = SearchExit::interior;
            res.f_step = f0 + q.f_delta;
            return res;
        }
        if (q.in_l)
            lo = mid;
        else
            hi = mid;
    }

    res.t = best_l_t;
    res.exit = SearchExit::cap_fallback;
    if (best_l_t > 0.0)
        res.f_step = f0 + best_l_fdelta;
    return res;
}

} // namespace scsvm
