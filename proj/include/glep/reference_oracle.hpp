#pragma once

#include <vector>

#include "glep/core_types.hpp"

// Slow, independent reference computations used to check the fast paths.
namespace glep::oracle {

struct OracleConfig {
    double tol = 1e-10;      // gradient-norm stopping tolerance
    int max_iter = 200000;
    double step = 0.1;       // initial step, halved whenever a step fails to decrease g

    void validate() const;
};

/// Minimizes 0.5 ||x - v||^2 + lambda ||x||_q by plain gradient descent on the
/// open orthant of sgn(v) restricted to the support of v, where the objective
/// is smooth. Shares no code with the projection module. Throws OracleFailure
/// when it cannot reach the tolerance.
Vector brute_prox(const Vector& v, double lambda, double q, const OracleConfig& cfg = {});

struct OracleRun {
    Vector x;                 // final iterate, signs restored
    bool converged = false;
    double gradient_norm = 0.0;
    int iterations = 0;
};

// Same descent without the throw: a non-converged run still reports its last
// point, which upper-bounds the optimal objective.
OracleRun brute_prox_run(const Vector& v, double lambda, double q, const OracleConfig& cfg = {});

struct FixedPointTrace {
    std::vector<Vector> iterates;  // iterates[0] is the start
    bool truncated = false;        // hit zero or a non-finite value
};

// Iterates x <- v - lambda ||x||_q^(1-q) sgn(x) |x|^(q-1).
FixedPointTrace fixed_point_trace(const Vector& v, double lambda, double q, const Vector& start, int iters);

// First t with |x_0^(t+1) - x_0^(t)| <= tol, or -1.
int first_settled_step(const FixedPointTrace& trace, double tol);

}  // namespace glep::oracle
