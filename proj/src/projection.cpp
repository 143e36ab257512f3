#include "glep/projection.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace glep {

namespace {

constexpr double kZeroGap = 1e-12;       // relative gap ||v||_qbar - lambda treated as zero
constexpr double kBracketSlack = 1e-9;   // relative rounding slack on phi at the bracket ends

void require_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be finite and nonnegative");
    }
}

double sgn(double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); }

// lambda * ||x||_q^(1-q) / c, in log space.
double psi_ratio(VectorRef x, double lambda, double q, double c) {
    const double nx = q_norm(x, q);
    const double log_ratio = std::log(lambda) + (1.0 - q) * std::log(nx) - std::log(c);
    return std::exp(log_ratio);
}

double phi_from_roots(VectorRef x, double lambda, double q, double c) {
    if (c == 0.0) return lambda * std::exp((1.0 - q) * std::log(q_norm(x, q)));
    return c * (psi_ratio(x, lambda, q, c) - 1.0);
}

struct RootsAt {
    Vector x;
    int iterations = 0;
};

RootsAt inner_roots(double c, VectorRef v_abs, double q, const RootConfig& cfg,
                    const Vector* lower = nullptr, const Vector* upper = nullptr) {
    RootsAt out{Vector(v_abs.size()), 0};
    for (Eigen::Index i = 0; i < v_abs.size(); ++i) {
        std::optional<RootHint> hint;
        if (lower && upper) hint = RootHint{(*lower)[i], (*upper)[i]};
        const auto r = h_root_detailed(v_abs[i], c, q, cfg, hint);
        out.x[i] = r.x;
        out.iterations += r.iterations;
    }
    return out;
}

void require_positive_entries(VectorRef v_abs, const char* who) {
    for (Eigen::Index i = 0; i < v_abs.size(); ++i) {
        if (!(v_abs[i] > 0.0) || !std::isfinite(v_abs[i])) {
            throw InvalidArgument(std::string(who) + ": entries must be finite and strictly positive");
        }
    }
}

}  // namespace

bool is_zero_solution(VectorRef v, double lambda, Exponent q) {
    return lambda >= q_norm(v, dual_exponent(q));
}

Vector prox_l1(VectorRef v, double lambda) {
    require_lambda(lambda);
    Vector x(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        x[i] = sgn(v[i]) * std::max(std::abs(v[i]) - lambda, 0.0);
    }
    return x;
}

Vector prox_l2(VectorRef v, double lambda) {
    require_lambda(lambda);
    const double norm = q_norm(v, 2.0);
    if (norm <= lambda) return Vector::Zero(v.size());
    return ((norm - lambda) / norm) * v;
}

Vector prox_linf(VectorRef v, double lambda) {
    require_lambda(lambda);
    if (lambda == 0.0) return v;
    const Vector a = v.cwiseAbs();
    if (lambda >= a.sum()) return Vector::Zero(v.size());
    const double t = l1_ball_threshold(std::span<const double>(a.data(), a.size()), lambda);
    Vector x(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) x[i] = sgn(v[i]) * std::min(a[i], t);
    return x;
}

CInterval c_interval(VectorRef v_abs, double epsilon, double q) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("c_interval: epsilon must lie in (0, 1)");
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("c_interval: q must lie in (1, inf)");
    if (v_abs.size() == 0) throw InvalidArgument("c_interval: empty vector");
    require_positive_entries(v_abs, "c_interval");

    // c_i is monotone in v_i, so the extremes sit at the largest and smallest entries.
    const double base = std::log1p(-epsilon) - (q - 1.0) * std::log(epsilon);
    auto c_at = [&](double vi) {
        const double log_c = base - (q - 2.0) * std::log(vi);
        const double c = std::exp(log_c);
        return std::min(std::max(c, std::numeric_limits<double>::min()),
                        std::numeric_limits<double>::max());
    };
    const double c_max_v = c_at(v_abs.maxCoeff());
    const double c_min_v = c_at(v_abs.minCoeff());
    return CInterval{std::min(c_max_v, c_min_v), std::max(c_max_v, c_min_v)};
}

double phi(double c, VectorRef v_abs, double lambda, double q, const RootConfig& cfg) {
    if (!(c >= 0.0)) throw InvalidArgument("phi: c must be nonnegative");
    if (!(lambda > 0.0)) throw InvalidArgument("phi: lambda must be positive");
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("phi: q must lie in (1, inf)");
    require_positive_entries(v_abs, "phi");
    if (c == 0.0) return phi_from_roots(v_abs, lambda, q, 0.0);
    return phi_from_roots(inner_roots(c, v_abs, q, cfg).x, lambda, q, c);
}

ProxResult prox_lq_general(VectorRef v, double lambda, double q, const RootConfig& cfg) {
    require_lambda(lambda);
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("prox_lq_general: q must lie in (1, inf)");
    cfg.validate();

    const Eigen::Index n = v.size();
    ProxResult out{Vector::Zero(n), {}};
    if (lambda == 0.0) {
        out.x = v;
        return out;
    }

    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (v[i] != 0.0) support.push_back(i);
    }
    if (support.empty()) return out;
    Vector a(static_cast<Eigen::Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) a[static_cast<Eigen::Index>(j)] = std::abs(v[support[j]]);

    const double q_dual = q / (q - 1.0);
    const double dual_norm = q_norm(a, q_dual);
    if (lambda >= dual_norm || dual_norm - lambda < kZeroGap * dual_norm) return out;

    const double epsilon = (dual_norm - lambda) / dual_norm;
    out.diag.epsilon = epsilon;
    const CInterval bounds = c_interval(a, epsilon, q);

    double c1 = bounds.low;
    double c2 = bounds.high;
    RootsAt r1 = inner_roots(c1, a, q, cfg);
    RootsAt r2 = c2 == c1 ? r1 : inner_roots(c2, a, q, cfg);
    int inner_total = r1.iterations + (c2 == c1 ? 0 : r2.iterations);
    double f1 = phi_from_roots(r1.x, lambda, q, c1);
    double f2 = phi_from_roots(r2.x, lambda, q, c2);

    if (f1 < -kBracketSlack * c1 || f2 > kBracketSlack * c2 || std::isnan(f1) || std::isnan(f2)) {
        throw BracketInconsistency("prox_lq_general: phi has the wrong sign at the bracket ends (eps=" +
                                       std::to_string(epsilon) + ", phi(c_low)=" + std::to_string(f1) +
                                       ", phi(c_high)=" + std::to_string(f2) + ")",
                                   epsilon, c1, c2, f1, f2);
    }

    double c_star = 0.0;
    int outer = 0;
    Vector x_abs;
    if (f1 <= 0.0) {
        c_star = c1;
        x_abs = r1.x;
    } else if (f2 >= 0.0) {
        c_star = c2;
        x_abs = r2.x;
    } else {
        // Invariant: f1 > 0 > f2, and r2.x < x(c) < r1.x for every c in (c1, c2).
        // The solution lies between the roots at the bracket ends, so the
        // bracket is tight once those agree to delta in every coordinate
        // (relative to the coordinate when it is below one).
        auto loose = [&] {
            const Vector tol = cfg.delta * r2.x.cwiseMin(1.0);
            return ((r1.x - r2.x).array() > tol.array()).any();
        };
        bool exact = false;
        while (loose()) {
            const double mid = detail::midpoint(c1, c2, Midpoint::geometric_when_wide);
            if (!(mid > c1 && mid < c2)) break;
            if (outer == cfg.max_iter) {
                throw NonConvergence("prox_lq_general: outer bisection hit max_iter", c1, c2);
            }
            ++outer;
            RootsAt rm = inner_roots(mid, a, q, cfg, &r2.x, &r1.x);
            inner_total += rm.iterations;
            const double fm = phi_from_roots(rm.x, lambda, q, mid);
            if (fm == 0.0) {
                c_star = mid;
                x_abs = std::move(rm.x);
                exact = true;
                break;
            }
            if (fm > 0.0) {
                c1 = mid;
                f1 = fm;
                r1 = std::move(rm);
            } else {
                c2 = mid;
                f2 = fm;
                r2 = std::move(rm);
            }
        }
        if (!exact) {
            c_star = detail::secant_point(Bracket{c1, c2, f1, f2});
            RootsAt rs = inner_roots(c_star, a, q, cfg, &r2.x, &r1.x);
            inner_total += rs.iterations;
            x_abs = std::move(rs.x);
        }
    }

    for (std::size_t j = 0; j < support.size(); ++j) {
        const Eigen::Index i = support[j];
        out.x[i] = sgn(v[i]) * x_abs[static_cast<Eigen::Index>(j)];
    }
    out.diag.c_star = c_star;
    out.diag.outer_iters = outer;
    out.diag.inner_iters_total = inner_total;
    out.diag.residual = optimality_residual(out.x, v, lambda, q);
    return out;
}

ProxResult prox_group(VectorRef v, double lambda, Exponent q, const RootConfig& cfg) {
    require_lambda(lambda);
    ProxResult out{Vector::Zero(v.size()), {}};
    if (lambda == 0.0) {
        out.x = v;
        return out;
    }
    if (is_zero_solution(v, lambda, q)) return out;

    if (q.is_one()) {
        out.x = prox_l1(v, lambda);
        out.diag.epsilon = (v.cwiseAbs().maxCoeff() - lambda) / v.cwiseAbs().maxCoeff();
    } else if (q.is_two()) {
        const double norm = q_norm(v, 2.0);
        out.x = prox_l2(v, lambda);
        out.diag.epsilon = (norm - lambda) / norm;
        out.diag.residual = optimality_residual(out.x, v, lambda, 2.0);
    } else if (q.is_infinite()) {
        const double norm = v.cwiseAbs().sum();
        out.x = prox_linf(v, lambda);
        out.diag.epsilon = (norm - lambda) / norm;
    } else {
        out = prox_lq_general(v, lambda, q.value(), cfg);
    }
    return out;
}

GroupedVector prox_grouped(const GroupedVector& v, double lambda, Exponent q, const RootConfig& cfg) {
    require_lambda(lambda);
    GroupedVector out = GroupedVector::zeros(v.groups());
    for (Eigen::Index g = 0; g < v.group_count(); ++g) {
        try {
            out.group(g) = prox_group(v.group(g), lambda, q, cfg).x;
        } catch (const GroupFailure&) {
            throw;
        } catch (const NumericalError& e) {
            throw GroupFailure(static_cast<std::size_t>(g), e.what());
        }
    }
    return out;
}

double optimality_residual(VectorRef x, VectorRef v, double lambda, double q) {
    if (x.size() != v.size()) throw InvalidArgument("optimality_residual: size mismatch");
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("optimality_residual: q must lie in (1, inf)");
    const double nx = q_norm(x, q);
    if (nx == 0.0) throw InvalidArgument("optimality_residual: undefined at x = 0");
    const double scale = lambda * std::exp((1.0 - q) * std::log(nx));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double term = sgn(x[i]) * pow_nonneg(std::abs(x[i]), q - 1.0);
        const double shrink = term == 0.0 ? 0.0 : scale * term;
        worst = std::max(worst, std::abs(x[i] + shrink - v[i]));
    }
    return worst;
}

double prox_objective(VectorRef x, VectorRef v, double lambda, Exponent q) {
    return 0.5 * (x - v).squaredNorm() + lambda * q_norm(x, q);
}

}  // namespace glep
