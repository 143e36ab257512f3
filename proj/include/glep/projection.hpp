#pragma once

#include <optional>

#include "glep/core_types.hpp"
#include "glep/rootfind.hpp"

namespace glep {

/// Diagnostics of a single-group projection.
///
/// `epsilon` is (||v||_qbar - lambda) / ||v||_qbar on the support of v and lies
/// in (0, 1). `c_star` is only set by the general-q path, where it is the
/// root of phi. `residual` is the max-norm defect of the optimality condition
/// x + lambda ||x||_q^(1-q) x^(q-1) = v, zero for the exact zero solution.
struct ProxDiagnostics {
    std::optional<double> c_star;
    std::optional<double> epsilon;
    int outer_iters = 0;
    int inner_iters_total = 0;
    double residual = 0.0;
};

struct ProxResult {
    Vector x;
    ProxDiagnostics diag;
};

struct CInterval {
    double low;
    double high;
};

// lambda >= ||v||_qbar, where the projection is exactly zero.
bool is_zero_solution(VectorRef v, double lambda, Exponent q);

Vector prox_l1(VectorRef v, double lambda);
Vector prox_l2(VectorRef v, double lambda);
Vector prox_linf(VectorRef v, double lambda);

/// Bracket [c_low, c_high] for the root of phi, from c_i = (1 - eps) / (eps^(q-1) v_i^(q-2)).
/// Computed in log space and clamped to the finite double range.
CInterval c_interval(VectorRef v_abs, double epsilon, double q);

/// phi(c) = lambda (sum_i x_i(c)^q)^((1-q)/q) - c, with x_i(c) the inner
/// root for v_i. Every entry of v_abs must be strictly positive.
double phi(double c, VectorRef v_abs, double lambda, double q, const RootConfig& cfg = {});

/// Projection for 1 < q < inf by nested zero finding: bisection on phi over
/// [c_low, c_high], each phi evaluation solving one inner root per
/// coordinate inside the interval spanned by the roots at the current
/// bracket ends.
ProxResult prox_lq_general(VectorRef v, double lambda, double q, const RootConfig& cfg = {});

/// Single-group dispatcher: zero test, then the q = 1, 2, inf closed forms,
/// then the general path.
ProxResult prox_group(VectorRef v, double lambda, Exponent q, const RootConfig& cfg = {});

/// Group-wise projection pi_1q(V, lambda); groups are independent.
GroupedVector prox_grouped(const GroupedVector& v, double lambda, Exponent q,
                           const RootConfig& cfg = {});

// max_i |x_i + lambda ||x||_q^(1-q) sgn(x_i)|x_i|^(q-1) - v_i|; x must be nonzero.
double optimality_residual(VectorRef x, VectorRef v, double lambda, double q);

// 0.5 ||x - v||^2 + lambda ||x||_q
double prox_objective(VectorRef x, VectorRef v, double lambda, Exponent q);

}  // namespace glep
