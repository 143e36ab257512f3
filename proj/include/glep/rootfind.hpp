#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "glep/errors.hpp"

namespace glep {

struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;

    template <class F>
    static Bracket evaluate(F&& f, double lo, double hi) {
        return Bracket{lo, hi, f(lo), f(hi)};
    }
    double width() const { return hi - lo; }
};

struct RootConfig {
    double delta = 1e-8;
    int max_iter = 200;

    void validate() const;
};

enum class Midpoint {
    arithmetic,
    // sqrt(lo * hi) while hi > 2 lo > 0, arithmetic afterwards.
    geometric_when_wide,
};

struct BisectionResult {
    double root;
    Bracket bracket;  // final sign-changing bracket
    int iterations;
};

namespace detail {

inline bool sign_changes(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

inline double midpoint(double lo, double hi, Midpoint rule) {
    if (rule == Midpoint::geometric_when_wide && lo > 0.0 && hi > 2.0 * lo) {
        return std::sqrt(lo) * std::sqrt(hi);
    }
    return lo + 0.5 * (hi - lo);
}

// Root of the chord through the bracket endpoints; the midpoint if either value is not finite.
inline double secant_point(const Bracket& b) {
    if (!std::isfinite(b.f_lo) || !std::isfinite(b.f_hi) || b.f_lo == b.f_hi) {
        return b.lo + 0.5 * (b.hi - b.lo);
    }
    const double t = b.f_lo / (b.f_lo - b.f_hi);
    const double x = b.lo + t * (b.hi - b.lo);
    return std::min(std::max(x, b.lo), b.hi);
}

}  // namespace detail

// Bracketing bisection. Stops once the bracket is no wider than delta, or when
// it can no longer be split in floating point; the returned root is the secant
// point of the final bracket.
template <class F>
BisectionResult bisect_detailed(F&& f, Bracket b, const RootConfig& cfg,
                                Midpoint rule = Midpoint::arithmetic) {
    cfg.validate();
    if (!(b.lo <= b.hi)) throw BadBracket("bisect: lo > hi");
    if (b.f_lo == 0.0) return {b.lo, Bracket{b.lo, b.lo, 0.0, 0.0}, 0};
    if (b.f_hi == 0.0) return {b.hi, Bracket{b.hi, b.hi, 0.0, 0.0}, 0};
    if (!detail::sign_changes(b.f_lo, b.f_hi)) {
        throw BadBracket("bisect: no sign change on [" + std::to_string(b.lo) + ", " +
                         std::to_string(b.hi) + "]");
    }
    int iter = 0;
    while (b.width() > cfg.delta) {
        const double mid = detail::midpoint(b.lo, b.hi, rule);
        if (!(mid > b.lo && mid < b.hi)) break;
        if (iter == cfg.max_iter) {
            throw NonConvergence("bisect: max_iter reached with bracket width " +
                                     std::to_string(b.width()),
                                 b.lo, b.hi);
        }
        ++iter;
        const double fm = f(mid);
        if (fm == 0.0) return {mid, Bracket{mid, mid, 0.0, 0.0}, iter};
        if (detail::sign_changes(b.f_lo, fm)) {
            b.hi = mid;
            b.f_hi = fm;
        } else {
            b.lo = mid;
            b.f_lo = fm;
        }
    }
    return {detail::secant_point(b), b, iter};
}

template <class F>
double bisect(F&& f, const Bracket& bracket, const RootConfig& cfg) {
    return bisect_detailed(std::forward<F>(f), bracket, cfg).root;
}

// x^e for x >= 0, with 0^e = 0 for e > 0.
double pow_nonneg(double x, double e);

// Search interval for h_root taken from roots at neighbouring c values.
struct RootHint {
    double lo;
    double hi;
};

struct InnerRoot {
    double x;
    int iterations;
};

// Unique root in (0, v) of x + c x^(q-1) - v, i.e. the inverse of
// omega(x) = (v - x) / x^(q-1) evaluated at c.
InnerRoot h_root_detailed(double v, double c, double q, const RootConfig& cfg,
                          std::optional<RootHint> hint = std::nullopt);
double h_root(double v, double c, double q, const RootConfig& cfg,
              std::optional<RootHint> hint = std::nullopt);

// t* >= 0 with sum_i max(v_abs_i - t*, 0) = lambda, by sort-and-scan.
double l1_ball_threshold(std::span<const double> v_abs, double lambda);

}  // namespace glep
