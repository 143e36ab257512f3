#include "glep/core_types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace glep {

Exponent Exponent::finite(double q) {
    if (!std::isfinite(q) || !(q >= 1.0)) {
        throw InvalidArgument("invalid exponent: q must be a finite real >= 1 (got " +
                              std::to_string(q) + ")");
    }
    if (q < 1.0 + kUnitSnap) return Exponent{1.0};
    return Exponent{q};
}

double Exponent::value() const {
    if (!value_) throw InvalidArgument("exponent is infinite");
    return *value_;
}

std::string Exponent::to_string() const {
    if (!value_) return "inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), *value_);
    return std::string(buf, end);
}

Exponent Exponent::parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "INF") return infinity();
    double q = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), q);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidArgument("invalid exponent: cannot parse '" + text + "'");
    }
    return finite(q);
}

Exponent dual_exponent(Exponent q) {
    if (q.is_infinite()) return Exponent::finite(1.0);
    if (q.is_one()) return Exponent::infinity();
    const double p = q.value();
    return Exponent::finite(p / (p - 1.0));
}

double q_norm(VectorRef v, double q) {
    if (!(q >= 1.0) || !std::isfinite(q)) throw InvalidArgument("q_norm: q must be finite and >= 1");
    if (v.size() == 0) return 0.0;
    const double scale = v.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    if (q == 1.0) return v.cwiseAbs().sum();
    if (q == 2.0) return scale * (v / scale).norm();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double r = std::abs(v[i]) / scale;
        if (r > 0.0) acc += std::pow(r, q);
    }
    return scale * std::pow(acc, 1.0 / q);
}

double q_norm(VectorRef v, Exponent q) {
    if (q.is_infinite()) return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
    return q_norm(v, q.value());
}

Groups::Groups(std::vector<Eigen::Index> offsets) : offsets_(std::move(offsets)) {
    if (offsets_.size() < 2) throw InvalidArgument("groups: need at least one group");
    if (offsets_.front() != 0) throw InvalidArgument("groups: offsets must start at 0");
    for (std::size_t i = 1; i < offsets_.size(); ++i) {
        if (offsets_[i] <= offsets_[i - 1]) {
            throw InvalidArgument("groups: offsets must be strictly increasing (empty group " +
                                  std::to_string(i - 1) + ")");
        }
    }
}

Groups Groups::uniform(Eigen::Index count, Eigen::Index size) {
    if (count < 1 || size < 1) throw InvalidArgument("groups: count and size must be positive");
    std::vector<Eigen::Index> offsets(static_cast<std::size_t>(count) + 1);
    for (Eigen::Index i = 0; i <= count; ++i) offsets[static_cast<std::size_t>(i)] = i * size;
    return Groups(std::move(offsets));
}

GroupedVector::GroupedVector(Vector values, Groups groups)
    : values_(std::move(values)), groups_(std::move(groups)) {
    if (values_.size() != groups_.total_size()) {
        throw InvalidArgument("grouped vector: length " + std::to_string(values_.size()) +
                              " does not match partition size " +
                              std::to_string(groups_.total_size()));
    }
    if (!values_.allFinite()) throw InvalidArgument("grouped vector: non-finite value");
}

GroupedVector GroupedVector::zeros(const Groups& groups) {
    return GroupedVector(Vector::Zero(groups.total_size()), groups);
}

double mixed_norm(const GroupedVector& w, Exponent q) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < w.group_count(); ++i) total += q_norm(w.group(i), q);
    return total;
}

}  // namespace glep
