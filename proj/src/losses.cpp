#include "glep/losses.hpp"

#include <cmath>

namespace glep {

namespace {

void check_shape(const Matrix& w, const Dataset& data) {
    if (w.rows() != data.features() || w.cols() != data.tasks()) {
        throw InvalidArgument("loss: coefficient matrix is " + std::to_string(w.rows()) + "x" +
                              std::to_string(w.cols()) + ", expected " +
                              std::to_string(data.features()) + "x" + std::to_string(data.tasks()));
    }
    if (data.design.rows() != data.targets.rows()) {
        throw InvalidArgument("loss: design and targets have different sample counts");
    }
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// 1 / (1 + exp(-z))
double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

std::string to_string(LossKind kind) {
    return kind == LossKind::least_squares ? "least_squares" : "logistic";
}

LossKind parse_loss_kind(const std::string& text) {
    if (text == "least_squares" || text == "ls") return LossKind::least_squares;
    if (text == "logistic") return LossKind::logistic;
    throw InvalidArgument("unknown loss '" + text + "' (expected least_squares or logistic)");
}

void Dataset::validate(LossKind kind) const {
    if (design.rows() < 1 || design.cols() < 1 || targets.cols() < 1) {
        throw InvalidArgument("dataset: empty design or targets");
    }
    if (design.rows() != targets.rows()) {
        throw InvalidArgument("dataset: design has " + std::to_string(design.rows()) +
                              " rows but targets have " + std::to_string(targets.rows()));
    }
    if (!design.allFinite() || !targets.allFinite()) throw InvalidArgument("dataset: non-finite entry");
    if (kind == LossKind::logistic) {
        for (Eigen::Index i = 0; i < targets.size(); ++i) {
            const double y = targets.data()[i];
            if (y != 1.0 && y != -1.0) throw InvalidArgument("dataset: logistic targets must be +1 or -1");
        }
    }
}

Vector flatten_rows(const Matrix& w) {
    Vector flat(w.size());
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        flat.data(), w.rows(), w.cols()) = w;
    return flat;
}

Matrix unflatten_rows(VectorRef flat, Eigen::Index d, Eigen::Index k) {
    if (flat.size() != d * k) throw InvalidArgument("unflatten_rows: size mismatch");
    const Vector copy = flat;
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        copy.data(), d, k);
}

Groups row_groups(Eigen::Index d, Eigen::Index k) { return Groups::uniform(d, k); }

double loss_value(const Matrix& w, const Dataset& data, LossKind kind) {
    check_shape(w, data);
    const Matrix margin = data.design * w;
    if (kind == LossKind::least_squares) return 0.5 * (margin - data.targets).squaredNorm();
    double total = 0.0;
    for (Eigen::Index t = 0; t < margin.cols(); ++t) {
        for (Eigen::Index i = 0; i < margin.rows(); ++i) {
            total += softplus(-data.targets(i, t) * margin(i, t));
        }
    }
    return total;
}

Matrix loss_gradient(const Matrix& w, const Dataset& data, LossKind kind) {
    check_shape(w, data);
    const Matrix margin = data.design * w;
    if (kind == LossKind::least_squares) return data.design.transpose() * (margin - data.targets);
    // d/dz log(1 + exp(-y z)) = -y sigmoid(-y z)
    Matrix weights(margin.rows(), margin.cols());
    for (Eigen::Index t = 0; t < margin.cols(); ++t) {
        for (Eigen::Index i = 0; i < margin.rows(); ++i) {
            const double y = data.targets(i, t);
            weights(i, t) = -y * sigmoid(-y * margin(i, t));
        }
    }
    return data.design.transpose() * weights;
}

}  // namespace glep
