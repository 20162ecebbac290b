#include "scsvm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "scsvm/errors.hpp"
#include "scsvm/kernel.hpp"
#include "scsvm/objective.hpp"

namespace scsvm {

SubdifferentialSpec subdifferential_at(const Dataset& data, const std::vector<index_t>& active,
                                       const Eigen::VectorXd& alpha, double gamma,
                                       double kink_tol) {
    if (active.empty())
        throw ConfigError("subdifferential_at: empty active set");
    if (static_cast<index_t>(active.size()) != alpha.size())
        throw ConfigError("subdifferential_at: alpha/active size mismatch");
    if (!(kink_tol >= 0.0))
        throw ConfigError("subdifferential_at: kink_tol must be nonnegative");

    GrowingKernel kernel(gamma, static_cast<index_t>(active.size()));
    kernel.extend(active, data);
    const index_t m = data.rows();
    std::vector<index_t> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), index_t{0});
    const Eigen::MatrixXd cross = kernel.cross_rows(all, data);

    SubdifferentialSpec spec;
    spec.base = kernel.gram() * alpha;
    const double invm = 1.0 / static_cast<double>(m);
    for (index_t i = 0; i < m; ++i) {
        const double margin = data.labels[i] * cross.row(i).dot(alpha);
        if (std::abs(margin - 1.0) <= kink_tol)
            spec.generators.push_back(-(invm * data.labels[i]) * cross.row(i).transpose());
        else if (margin < 1.0)
            spec.base -= (invm * data.labels[i]) * cross.row(i).transpose();
    }
    return spec;
}

MinNormResult min_norm_subgradient(const SubdifferentialSpec& spec, double tol) {
    if (!(tol > 0.0))
        throw ConfigError("min_norm_subgradient: tol must be positive");
    const index_t big_k = static_cast<index_t>(spec.generators.size());
    if (big_k > 30)
        throw ConfigError("min_norm_subgradient: more than 30 kink generators");
    for (const auto& gen : spec.generators) {
        if (gen.size() != spec.base.size())
            throw ConfigError("min_norm_subgradient: generator dimension mismatch");
    }

    MinNormResult res;
    res.c = Eigen::VectorXd::Zero(big_k);
    Eigen::VectorXd g = spec.base;
    if (big_k == 0) {
        res.d_star = -g;
        res.norm = g.norm();
        return res;
    }

    std::vector<double> nrm2(static_cast<std::size_t>(big_k));
    for (index_t k = 0; k < big_k; ++k)
        nrm2[static_cast<std::size_t>(k)] = spec.generators[static_cast<std::size_t>(k)].squaredNorm();

    const double scale = std::max(1.0, spec.base.norm());
    constexpr long kMaxSweeps = 200000;
    for (long sweep = 1; sweep <= kMaxSweeps; ++sweep) {
        for (index_t k = 0; k < big_k; ++k) {
            const auto& gen = spec.generators[static_cast<std::size_t>(k)];
            const double n2 = nrm2[static_cast<std::size_t>(k)];
            if (n2 == 0.0)
                continue;
            const double cnew = std::clamp(res.c[k] - gen.dot(g) / n2, 0.0, 1.0);
            if (cnew != res.c[k]) {
                g += (cnew - res.c[k]) * gen;
                res.c[k] = cnew;
            }
        }
        if (sweep % 256 == 0) {
            // rebuild g against incremental-update drift
            g = spec.base;
            for (index_t k = 0; k < big_k; ++k)
                g += res.c[k] * spec.generators[static_cast<std::size_t>(k)];
        }
        res.sweeps = sweep;

        double resid = 0.0;
        for (index_t k = 0; k < big_k; ++k) {
            const double grad = spec.generators[static_cast<std::size_t>(k)].dot(g);
            double proj = grad;
            if (res.c[k] <= 0.0)
                proj = std::min(grad, 0.0);
            else if (res.c[k] >= 1.0)
                proj = std::max(grad, 0.0);
            resid = std::max(resid, std::abs(proj));
        }
        if (resid <= tol * scale) {
            res.d_star = -g;
            res.norm = g.norm();
            return res;
        }
    }
    throw DataError("min_norm_subgradient: no convergence within the sweep cap");
}

std::string CertificateReport::text() const {
    std::ostringstream out;
    out << "optimality certificate\n";
    out << "  ||d*||     = " << d_norm << "\n";
    out << "  threshold  = " << threshold << " (4*eps + eps_prime)\n";
    out << "  kink count = " << kink_count << "\n";
    out << "  verdict    = " << (pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

CertificateReport certify_optimality(const Dataset& data, const std::vector<index_t>& active,
                                     const Eigen::VectorXd& alpha, double gamma, double eps,
                                     double eps_prime) {
    if (!(eps > 0.0) || !(eps_prime >= 0.0))
        throw ConfigError("certify_optimality: eps must be positive, eps_prime nonnegative");
    const SubdifferentialSpec spec = subdifferential_at(data, active, alpha, gamma);
    const MinNormResult mn = min_norm_subgradient(spec, 1e-10);
    CertificateReport rep;
    rep.d_norm = mn.norm;
    rep.threshold = 4.0 * eps + eps_prime;
    rep.pass = mn.norm < rep.threshold;
    rep.kink_count = static_cast<index_t>(spec.generators.size());
    rep.d_star = mn.d_star;
    return rep;
}

DenseSolveResult dense_reference_solve(const Dataset& data, double gamma, double tol,
                                       const DenseSolveOptions& opts) {
    const index_t m = data.rows();
    if (m < 1)
        throw DataError("dense_reference_solve: empty dataset");
    if (m > 300)
        throw ConfigError("dense_reference_solve: instance too large (m > 300)");
    if (!(opts.c > 0.0))
        throw ConfigError("dense_reference_solve: step scale must be positive");
    if (opts.max_iters < 1 || opts.window < 1)
        throw ConfigError("dense_reference_solve: budget parameters must be positive");

    const double g_rbf = gamma > 0.0 ? gamma : default_rbf_gamma(data.features);
    std::vector<index_t> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), index_t{0});
    GrowingKernel kernel(g_rbf, m);
    kernel.extend(all, data);
    const Eigen::MatrixXd& q = kernel.gram();
    const double invm = 1.0 / static_cast<double>(m);
    // Steps are scaled by the Gram spectral norm: c/sqrt(k) alone makes the
    // quadratic part expand (|1 - step * lambda_max| > 1) until k ~ (c *
    // lambda_max / 2)^2, long enough to overflow on clustered data. With the
    // scaling every eigendirection contracts from the first iteration.
    const double lip =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .maxCoeff();

    Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd qa(m), coef(m), g(m);

    DenseSolveResult res;
    res.alpha = x;
    res.value = 1.0; // f(0): unit hinge on every sample
    double window_best = res.value;
    for (long k = 1; k <= opts.max_iters; ++k) {
        qa.noalias() = q * x;
        double hinge = 0.0;
        for (index_t i = 0; i < m; ++i) {
            const double margin = data.labels[i] * qa[i];
            hinge += std::max(0.0, 1.0 - margin);
            coef[i] = margin < 1.0 ? -data.labels[i] * invm : 0.0;
        }
        const double value = 0.5 * x.dot(qa) + hinge * invm;
        if (value < res.value) {
            res.value = value;
            res.alpha = x;
        }
        g.noalias() = q * coef;
        g += qa;
        x -= (opts.c / (lip * std::sqrt(static_cast<double>(k)))) * g;
        res.iters = k;
        if (k % opts.window == 0) {
            res.achieved_tol = window_best - res.value;
            if (std::isfinite(tol) && res.achieved_tol < tol) {
                res.stabilized = true;
                return res;
            }
            window_best = res.value;
        }
    }
    res.achieved_tol = window_best - res.value;
    res.stabilized = std::isfinite(tol) && res.achieved_tol < tol;
    return res;
}

double fd_directional_derivative(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, const Eigen::VectorXd& dir,
                                 double h) {
    if (!(h > 0.0))
        throw ConfigError("fd_directional_derivative: h must be positive");
    return (f(x + h * dir) - f(x)) / h;
}

} // namespace scsvm
