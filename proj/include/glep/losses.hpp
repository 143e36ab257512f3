#pragma once

#include <string>

#include "glep/core_types.hpp"

namespace glep {

enum class LossKind { least_squares, logistic };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& text);

// design: m x d, targets: m x k. Logistic targets must be +-1.
struct Dataset {
    Matrix design;
    Matrix targets;

    Eigen::Index samples() const { return design.rows(); }
    Eigen::Index features() const { return design.cols(); }
    Eigen::Index tasks() const { return targets.cols(); }

    void validate(LossKind kind) const;
};

// Row-major flattening of a d x k coefficient matrix: row j occupies [j k, (j+1) k).
Vector flatten_rows(const Matrix& w);
Matrix unflatten_rows(VectorRef flat, Eigen::Index d, Eigen::Index k);

// One group per feature row of a d x k coefficient matrix.
Groups row_groups(Eigen::Index d, Eigen::Index k);

// 0.5 ||A W - Y||_F^2, or sum over samples and tasks of log(1 + exp(-y <a, w>)).
double loss_value(const Matrix& w, const Dataset& data, LossKind kind);
Matrix loss_gradient(const Matrix& w, const Dataset& data, LossKind kind);

}  // namespace glep
