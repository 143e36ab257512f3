#include "glep/solver.hpp"

#include <cmath>
#include <limits>

#include "glep/projection.hpp"

namespace glep {

namespace {

constexpr double kRoundingSlack = 8.0 * std::numeric_limits<double>::epsilon();

Matrix as_matrix(const GroupedVector& x, const Model& model) {
    return unflatten_rows(x.values(), model.features(), model.tasks());
}

}  // namespace

void Model::validate() const {
    data.validate(kind);
    if (groups.total_size() != data.features() * data.tasks()) {
        throw InvalidArgument("model: groups cover " + std::to_string(groups.total_size()) +
                              " coefficients, expected " +
                              std::to_string(data.features() * data.tasks()));
    }
}

void SolverConfig::validate() const {
    if (!(L0 > 0.0) || !std::isfinite(L0)) throw InvalidArgument("solver: L0 must be positive");
    if (max_iter < 1) throw InvalidArgument("solver: max_iter must be >= 1");
    if (!(rel_tol >= 0.0)) throw InvalidArgument("solver: rel_tol must be nonnegative");
    if (!(growth > 1.0)) throw InvalidArgument("solver: growth must exceed 1");
    if (max_doublings < 1) throw InvalidArgument("solver: max_doublings must be >= 1");
    root.validate();
}

SolverState SolverState::start(const GroupedVector& x0, double L0) {
    SolverState s;
    s.x_curr = x0;
    s.x_prev = x0;
    s.alpha_curr = 1.0;
    s.alpha_prev = 0.0;
    s.L = L0;
    s.iter = 0;
    return s;
}

double alpha_next(double alpha) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha * alpha)); }

double smooth_loss(const GroupedVector& x, const Model& model) {
    return loss_value(as_matrix(x, model), model.data, model.kind);
}

GroupedVector smooth_gradient(const GroupedVector& x, const Model& model) {
    return GroupedVector(flatten_rows(loss_gradient(as_matrix(x, model), model.data, model.kind)),
                         x.groups());
}

double objective(const GroupedVector& x, const Model& model, double lambda) {
    const double penalty = lambda == 0.0 ? 0.0 : lambda * mixed_norm(x, model.q);
    return smooth_loss(x, model) + penalty;
}

double model_value(const GroupedVector& y, const GroupedVector& x, double L, const Problem& problem) {
    if (!(L > 0.0)) throw InvalidArgument("model_value: L must be positive");
    const Model& m = problem.model;
    const Vector d = y.values() - x.values();
    const double linear = smooth_gradient(x, m).values().dot(d);
    const double penalty = problem.lambda == 0.0 ? 0.0 : problem.lambda * mixed_norm(y, m.q);
    return smooth_loss(x, m) + linear + penalty + 0.5 * L * d.squaredNorm();
}

GroupedVector prox_step(const GroupedVector& s, double L, const Problem& problem, const SolverConfig& cfg) {
    if (!(L > 0.0)) throw InvalidArgument("prox_step: L must be positive");
    const GroupedVector g = smooth_gradient(s, problem.model);
    GroupedVector v(s.values() - g.values() / L, s.groups());
    return prox_grouped(v, problem.lambda / L, problem.model.q, cfg.root);
}

StepRecord advance(SolverState& state, const Problem& problem, const SolverConfig& cfg,
                   GroupedVector* search_point) {
    const Model& m = problem.model;
    const int i = state.iter + 1;

    const double beta = (state.alpha_prev - 1.0) / state.alpha_curr;
    GroupedVector s(state.x_curr.values() + beta * (state.x_curr.values() - state.x_prev.values()),
                    state.x_curr.groups());
    const double loss_s = smooth_loss(s, m);
    const GroupedVector grad_s = smooth_gradient(s, m);
    if (!std::isfinite(loss_s) || !grad_s.values().allFinite()) {
        throw Divergence(i, "non-finite loss or gradient at the search point");
    }

    double L = state.L;
    for (int doublings = 0;; ++doublings) {
        if (doublings > cfg.max_doublings || !std::isfinite(L)) {
            throw Divergence(i, "line search failed to find an admissible L");
        }
        GroupedVector v(s.values() - grad_s.values() / L, s.groups());
        GroupedVector next = prox_grouped(v, problem.lambda / L, m.q, cfg.root);
        const Vector d = next.values() - s.values();
        const double loss_next = smooth_loss(next, m);
        if (!std::isfinite(loss_next)) throw Divergence(i, "non-finite objective");
        const double quad = loss_s + grad_s.values().dot(d) + 0.5 * L * d.squaredNorm();

        // f(X) <= M(X) compares l(X) to its quadratic model; the penalty is common to both.
        if (loss_next <= quad + kRoundingSlack * (std::abs(loss_s) + std::abs(loss_next))) {
            const double penalty = problem.lambda == 0.0 ? 0.0 : problem.lambda * mixed_norm(next, m.q);
            StepRecord rec{i, L, loss_next + penalty, quad + penalty, doublings};
            if (!std::isfinite(rec.objective)) throw Divergence(i, "non-finite objective");
            state.L = L;
            state.x_prev = std::move(state.x_curr);
            state.x_curr = std::move(next);
            state.alpha_prev = state.alpha_curr;
            state.alpha_curr = alpha_next(state.alpha_curr);
            state.iter = i;
            if (search_point) *search_point = std::move(s);
            return rec;
        }
        L *= cfg.growth;
    }
}

SolverResult solve(const Problem& problem, const SolverConfig& cfg, const SolveOptions& options) {
    cfg.validate();
    const Model& m = problem.model;
    m.validate();
    if (!(problem.lambda >= 0.0) || !std::isfinite(problem.lambda)) {
        throw InvalidArgument("solve: lambda must be finite and nonnegative");
    }

    GroupedVector x0 = options.x0 ? *options.x0 : GroupedVector::zeros(m.groups);
    if (x0.groups() != m.groups) throw InvalidArgument("solve: initial point has a different partition");

    SolverResult result;
    result.lambda = problem.lambda;
    result.W = x0;
    result.objective = objective(x0, m, problem.lambda);
    if (!std::isfinite(result.objective)) throw Divergence(0, "non-finite objective at the initial point");

    SolverState state = SolverState::start(x0, cfg.L0);
    double previous = result.objective;
    for (int it = 0; it < cfg.max_iter; ++it) {
        GroupedVector search_point;
        const StepRecord rec = advance(state, problem, cfg, options.observer ? &search_point : nullptr);
        if (options.observer) options.observer(rec, search_point, state.x_curr);

        result.objective_history.push_back(rec.objective);
        result.L_history.push_back(rec.L);
        result.iterations = rec.iteration;
        if (rec.objective < result.objective) {
            result.objective = rec.objective;
            result.W = state.x_curr;
        }
        if (std::abs(rec.objective - previous) <= cfg.rel_tol * std::max(1.0, std::abs(previous))) {
            result.converged = true;
            break;
        }
        previous = rec.objective;
    }
    return result;
}

double lambda_max(const Model& model) {
    model.validate();
    const GroupedVector grad = smooth_gradient(GroupedVector::zeros(model.groups), model);
    const Exponent dual = dual_exponent(model.q);
    double best = 0.0;
    for (Eigen::Index g = 0; g < grad.group_count(); ++g) best = std::max(best, q_norm(grad.group(g), dual));
    return best;
}

std::vector<SolverResult> reg_path(const Model& model, std::span<const double> ratios, const SolverConfig& cfg) {
    for (std::size_t j = 0; j < ratios.size(); ++j) {
        if (!(ratios[j] > 0.0 && ratios[j] <= 1.0)) throw InvalidArgument("reg_path: ratios must lie in (0, 1]");
        if (j > 0 && !(ratios[j] < ratios[j - 1])) {
            throw InvalidArgument("reg_path: ratios must be strictly decreasing");
        }
    }
    const double lmax = lambda_max(model);
    std::vector<SolverResult> path;
    path.reserve(ratios.size());
    Problem problem{model, 0.0};
    SolveOptions options;
    for (std::size_t j = 0; j < ratios.size(); ++j) {
        problem.lambda = ratios[j] * lmax;
        try {
            path.push_back(solve(problem, cfg, options));
        } catch (const NumericalError& e) {
            throw PathFailure(j, e.what());
        }
        options.x0 = path.back().W;
    }
    return path;
}

}  // namespace glep
