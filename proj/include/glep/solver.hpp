#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "glep/core_types.hpp"
#include "glep/losses.hpp"
#include "glep/rootfind.hpp"

namespace glep {

// Everything about a problem except the regularization weight. `groups`
// partitions the row-major flattened d x k coefficient matrix.
struct Model {
    Dataset data;
    LossKind kind = LossKind::least_squares;
    Groups groups;
    Exponent q = Exponent::finite(2.0);

    Eigen::Index features() const { return data.features(); }
    Eigen::Index tasks() const { return data.tasks(); }
    void validate() const;
};

struct Problem {
    Model model;
    double lambda = 0.0;
};

struct SolverConfig {
    double L0 = 1.0;
    int max_iter = 10000;
    double rel_tol = 1e-10;
    double growth = 2.0;
    int max_doublings = 200;
    RootConfig root;

    void validate() const;
};

// Iteration i holds X_i, X_{i-1}, alpha_{i-1}, alpha_{i-2} and the running L.
struct SolverState {
    GroupedVector x_curr;
    GroupedVector x_prev;
    double alpha_curr = 1.0;
    double alpha_prev = 0.0;
    double L = 1.0;
    int iter = 0;

    static SolverState start(const GroupedVector& x0, double L0);
};

// Accepted step: objective = f(X_{i+1}), model = M_{L,S_i}(X_{i+1}).
struct StepRecord {
    int iteration;
    double L;
    double objective;
    double model;
    int doublings;
};

using StepObserver = std::function<void(const StepRecord&, const GroupedVector& search_point,
                                        const GroupedVector& next)>;

struct SolverResult {
    GroupedVector W;
    double lambda = 0.0;
    double objective = 0.0;
    std::vector<double> objective_history;
    std::vector<double> L_history;
    int iterations = 0;
    bool converged = false;
};

double alpha_next(double alpha);

// l(X) + lambda sum_i ||x_i||_q
double objective(const GroupedVector& x, const Model& model, double lambda);
double smooth_loss(const GroupedVector& x, const Model& model);
GroupedVector smooth_gradient(const GroupedVector& x, const Model& model);

// l(X) + <l'(X), Y - X> + lambda varpi(Y) + L/2 ||Y - X||^2
double model_value(const GroupedVector& y, const GroupedVector& x, double L, const Problem& problem);

// argmin_Y M_{L,S}(Y) = pi_1q(S - l'(S)/L, lambda/L)
GroupedVector prox_step(const GroupedVector& s, double L, const Problem& problem,
                        const SolverConfig& cfg = {});

// One iteration of the accelerated scheme, line search included. The search
// point S_i is copied to `search_point` when given.
StepRecord advance(SolverState& state, const Problem& problem, const SolverConfig& cfg,
                   GroupedVector* search_point = nullptr);

struct SolveOptions {
    std::optional<GroupedVector> x0;
    StepObserver observer;
};

SolverResult solve(const Problem& problem, const SolverConfig& cfg = {}, const SolveOptions& options = {});

// max over groups of ||(l'(0))_i||_qbar; the zero model is optimal for lambda at or above it.
double lambda_max(const Model& model);

// Warm-started solves at ratios[j] * lambda_max, ratios strictly decreasing in (0, 1].
std::vector<SolverResult> reg_path(const Model& model, std::span<const double> ratios,
                                   const SolverConfig& cfg = {});

}  // namespace glep
