#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "glep/errors.hpp"

namespace glep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

// A norm exponent q in [1, inf]. Infinity is a state of its own, never a float.
class Exponent {
public:
    static Exponent finite(double q);
    static Exponent infinity() { return Exponent{}; }

    bool is_infinite() const { return !value_.has_value(); }
    bool is_one() const { return value_ && *value_ == 1.0; }
    bool is_two() const { return value_ && *value_ == 2.0; }
    // Throws for the infinite exponent.
    double value() const;

    std::string to_string() const;
    // Accepts a decimal number or "inf"/"infinity".
    static Exponent parse(const std::string& text);

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    Exponent() = default;
    explicit Exponent(double q) : value_(q) {}
    std::optional<double> value_;
};

// Exponents in (1, 1 + kUnitSnap) are stored as exactly 1.
inline constexpr double kUnitSnap = 1e-12;

Exponent dual_exponent(Exponent q);

struct NormSpec {
    explicit NormSpec(Exponent q) : q(q), q_dual(dual_exponent(q)) {}
    Exponent q;
    Exponent q_dual;
};

// ||v||_q, rescaled by max |v_i| before exponentiation.
double q_norm(VectorRef v, Exponent q);
double q_norm(VectorRef v, double q);

// Contiguous, non-overlapping partition of [0, p) into nonempty groups.
class Groups {
public:
    Groups() = default;
    explicit Groups(std::vector<Eigen::Index> offsets);
    static Groups uniform(Eigen::Index count, Eigen::Index size);

    Eigen::Index count() const { return static_cast<Eigen::Index>(offsets_.size()) - 1; }
    Eigen::Index total_size() const { return offsets_.back(); }
    Eigen::Index begin(Eigen::Index i) const { return offsets_[i]; }
    Eigen::Index size(Eigen::Index i) const { return offsets_[i + 1] - offsets_[i]; }
    const std::vector<Eigen::Index>& offsets() const { return offsets_; }

    friend bool operator==(const Groups&, const Groups&) = default;

private:
    std::vector<Eigen::Index> offsets_{0};
};

class GroupedVector {
public:
    GroupedVector() = default;
    GroupedVector(Vector values, Groups groups);
    static GroupedVector zeros(const Groups& groups);

    const Vector& values() const { return values_; }
    Vector& mutable_values() { return values_; }
    const Groups& groups() const { return groups_; }
    Eigen::Index size() const { return values_.size(); }
    Eigen::Index group_count() const { return groups_.count(); }

    auto group(Eigen::Index i) const { return values_.segment(groups_.begin(i), groups_.size(i)); }
    auto group(Eigen::Index i) { return values_.segment(groups_.begin(i), groups_.size(i)); }

private:
    Vector values_;
    Groups groups_;
};

// Sum over groups of the per-group q-norms.
double mixed_norm(const GroupedVector& w, Exponent q);

}  // namespace glep
