#include "glep/reference_oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace glep::oracle {

namespace {

// Plain power-sum norm; entries are assumed nonnegative.
double plain_norm(const Vector& y, double q) {
    const double top = y.maxCoeff();
    if (top <= 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) acc += std::pow(y[i] / top, q);
    return top * std::pow(acc, 1.0 / q);
}

double g_value(const Vector& y, const Vector& a, double lambda, double q) {
    return 0.5 * (y - a).squaredNorm() + lambda * plain_norm(y, q);
}

Vector g_gradient(const Vector& y, const Vector& a, double lambda, double q) {
    const double scale = lambda * std::pow(plain_norm(y, q), 1.0 - q);
    Vector grad(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) grad[i] = y[i] - a[i] + scale * std::pow(y[i], q - 1.0);
    return grad;
}

}  // namespace

void OracleConfig::validate() const {
    if (!(tol > 0.0) || max_iter < 1 || !(step > 0.0)) {
        throw InvalidArgument("oracle config: tol, max_iter and step must be positive");
    }
}

OracleRun brute_prox_run(const Vector& v, double lambda, double q, const OracleConfig& cfg) {
    cfg.validate();
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("brute_prox: q must lie in (1, inf)");
    if (!(lambda > 0.0)) throw InvalidArgument("brute_prox: lambda must be positive");

    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i] != 0.0) support.push_back(i);
    }
    OracleRun run;
    run.x = Vector::Zero(v.size());
    if (support.empty()) {
        run.converged = true;
        return run;
    }

    const auto n = static_cast<Eigen::Index>(support.size());
    Vector a(n);
    for (Eigen::Index j = 0; j < n; ++j) a[j] = std::abs(v[support[static_cast<std::size_t>(j)]]);

    Vector y = 0.5 * a;
    double gy = g_value(y, a, lambda, q);
    double step = cfg.step;
    for (; run.iterations < cfg.max_iter; ++run.iterations) {
        const Vector grad = g_gradient(y, a, lambda, q);
        run.gradient_norm = grad.norm();
        if (run.gradient_norm <= cfg.tol) {
            run.converged = true;
            break;
        }
        // Shrink the step until it stays in the open orthant and decreases g.
        // Near the minimum g stalls at rounding level, so a step that keeps g
        // within that level and shrinks the gradient also counts.
        bool moved = false;
        while (step > 1e-18) {
            const Vector trial = y - step * grad;
            if ((trial.array() > 0.0).all()) {
                const double gt = g_value(trial, a, lambda, q);
                const bool flat = gt <= gy + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(gy) &&
                                  g_gradient(trial, a, lambda, q).norm() < run.gradient_norm;
                if (gt < gy || flat) {
                    y = trial;
                    gy = gt;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!moved) break;
    }

    if (!run.converged) {
        // The only non-smooth point left out of the orthant search is the
        // origin; descent towards it slows to about 1/iteration.
        const double g0 = 0.5 * a.squaredNorm();
        if (y.norm() <= 1e-4 * a.norm() && g0 <= gy) {
            run.converged = true;
            return run;
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index i = support[static_cast<std::size_t>(j)];
        run.x[i] = (v[i] > 0.0 ? 1.0 : -1.0) * y[j];
    }
    return run;
}

Vector brute_prox(const Vector& v, double lambda, double q, const OracleConfig& cfg) {
    OracleRun run = brute_prox_run(v, lambda, q, cfg);
    if (!run.converged) throw OracleFailure("brute_prox: gradient descent did not reach the tolerance");
    return std::move(run.x);
}

FixedPointTrace fixed_point_trace(const Vector& v, double lambda, double q, const Vector& start, int iters) {
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("fixed_point_trace: q must lie in (1, inf)");
    if (start.size() != v.size()) throw InvalidArgument("fixed_point_trace: start has the wrong length");
    if (start.isZero(0.0)) throw InvalidArgument("fixed_point_trace: start must be nonzero");
    if (iters < 0) throw InvalidArgument("fixed_point_trace: iters must be nonnegative");

    FixedPointTrace trace;
    trace.iterates.push_back(start);
    Vector x = start;
    for (int t = 0; t < iters; ++t) {
        const double nx = plain_norm(x.cwiseAbs(), q);
        if (nx == 0.0) {
            trace.truncated = true;
            break;
        }
        const double scale = lambda * std::pow(nx, 1.0 - q);
        Vector next(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double s = x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0);
            next[i] = v[i] - scale * s * std::pow(std::abs(x[i]), q - 1.0);
        }
        if (!next.allFinite()) {
            trace.truncated = true;
            break;
        }
        x = next;
        trace.iterates.push_back(x);
    }
    return trace;
}

int first_settled_step(const FixedPointTrace& trace, double tol) {
    for (std::size_t t = 0; t + 1 < trace.iterates.size(); ++t) {
        if (std::abs(trace.iterates[t + 1][0] - trace.iterates[t][0]) <= tol) return static_cast<int>(t);
    }
    return -1;
}

}  // namespace glep::oracle
