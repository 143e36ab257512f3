#include "glep/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace glep {

void RootConfig::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("root config: delta must be > 0");
    if (max_iter < 1) throw InvalidArgument("root config: max_iter must be >= 1");
}

double pow_nonneg(double x, double e) {
    if (x == 0.0) return 0.0;
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == std::floor(e) && std::abs(e) <= 64.0) return std::pow(x, e);
    return std::exp(e * std::log(x));
}

InnerRoot h_root_detailed(double v, double c, double q, const RootConfig& cfg,
                          std::optional<RootHint> hint) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("h_root: v must be positive");
    if (!(c > 0.0) || std::isnan(c)) throw InvalidArgument("h_root: c must be positive");
    if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("h_root: q must lie in (1, inf)");

    const double e = q - 1.0;
    auto h = [&](double x) { return x + c * pow_nonneg(x, e) - v; };

    // h <= 0 where both x and c x^e are at most v/2, and h >= 0 once c x^e reaches v.
    const double tiny = std::numeric_limits<double>::min();
    Bracket b;
    if (h(tiny) > 0.0) {
        b = Bracket{0.0, tiny, -v, h(tiny)};
    } else {
        double lo = std::max(tiny, std::min(0.5 * v, std::exp((std::log(0.5 * v) - std::log(c)) / e)));
        double hi = std::min(v, std::exp((std::log(v) - std::log(c)) / e));
        if (hint) {
            lo = std::max(lo, hint->lo);
            hi = std::min(hi, hint->hi);
        }
        b = Bracket{lo, hi, h(lo), h(hi)};
        if (!(lo <= hi && b.f_lo <= 0.0 && b.f_hi >= 0.0)) b = Bracket{tiny, v, h(tiny), h(v)};
    }

    // Tiny roots are resolved relative to their size.
    RootConfig local = cfg;
    local.delta = cfg.delta * std::clamp(b.lo, tiny, 1.0);
    const auto r = bisect_detailed(h, b, local, Midpoint::geometric_when_wide);
    return {r.root, r.iterations};
}

double h_root(double v, double c, double q, const RootConfig& cfg, std::optional<RootHint> hint) {
    return h_root_detailed(v, c, q, cfg, hint).x;
}

double l1_ball_threshold(std::span<const double> v_abs, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("l1_ball_threshold: lambda must be positive");
    std::vector<double> sorted(v_abs.begin(), v_abs.end());
    for (double a : sorted) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw InvalidArgument("l1_ball_threshold: entries must be finite and nonnegative");
        }
    }
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    if (!(lambda < total)) {
        throw InvalidArgument("l1_ball_threshold: precondition lambda < sum(v_abs) violated");
    }
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    // On the segment where the k largest entries are active, h(t) = S_k - k t - lambda.
    double prefix = 0.0;
    double t = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        prefix += sorted[k];
        const double candidate = (prefix - lambda) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) {
            t = candidate;
        } else {
            break;
        }
    }
    return std::max(t, 0.0);
}

}  // namespace glep
