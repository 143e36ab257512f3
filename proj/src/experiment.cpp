#include "glep/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "glep/projection.hpp"

namespace glep {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

NonzeroDist parse_dist(const std::string& text) {
    if (text == "uniform" || text == "uniform01") return NonzeroDist::uniform01;
    if (text == "normal" || text == "standard_normal") return NonzeroDist::standard_normal;
    throw InvalidArgument("unknown distribution '" + text + "' (expected uniform or normal)");
}

std::string to_string(NonzeroDist dist) { return dist == NonzeroDist::uniform01 ? "uniform" : "normal"; }

std::vector<double> ExperimentConfig::geometric_ratios(double base, int count) {
    if (!(base > 0.0 && base < 1.0) || count < 1) throw InvalidArgument("ratios: need 0 < base < 1, count >= 1");
    std::vector<double> r(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = std::pow(base, i);
    return r;
}

void ExperimentConfig::validate() const {
    if (m < 1 || d < 1 || k < 1 || d_sparse < 1) throw InvalidArgument("experiment: m, d, d_sparse, k must be positive");
    if (d_sparse > d) throw InvalidArgument("experiment: d_sparse must not exceed d");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("experiment: sigma must be nonnegative");
    if (!(support_threshold >= 0.0 && support_threshold < 1.0)) {
        throw InvalidArgument("experiment: support threshold must lie in [0, 1)");
    }
    if (ratios.empty()) throw InvalidArgument("experiment: empty ratio list");
    for (std::size_t j = 0; j < ratios.size(); ++j) {
        if (!(ratios[j] > 0.0 && ratios[j] <= 1.0) || (j > 0 && !(ratios[j] < ratios[j - 1]))) {
            throw InvalidArgument("experiment: ratios must be strictly decreasing in (0, 1]");
        }
    }
}

SyntheticData synth_generate(const ExperimentConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    SyntheticData out;
    out.data.design.resize(cfg.m, cfg.d);
    for (Eigen::Index i = 0; i < cfg.m; ++i) {
        for (Eigen::Index j = 0; j < cfg.d; ++j) out.data.design(i, j) = rng.normal();
    }
    out.ground_truth = Matrix::Zero(cfg.d, cfg.k);
    for (Eigen::Index i = 0; i < cfg.d_sparse; ++i) {
        for (Eigen::Index j = 0; j < cfg.k; ++j) {
            out.ground_truth(i, j) =
                cfg.nonzero_dist == NonzeroDist::uniform01 ? rng.uniform01() : rng.normal();
        }
    }
    out.data.targets = out.data.design * out.ground_truth;
    if (cfg.sigma > 0.0) {
        for (Eigen::Index i = 0; i < cfg.m; ++i) {
            for (Eigen::Index j = 0; j < cfg.k; ++j) out.data.targets(i, j) += cfg.sigma * rng.normal();
        }
    }
    return out;
}

double support_f1(std::span<const double> row_norms, Eigen::Index d_sparse, double threshold) {
    const double top = row_norms.empty() ? 0.0 : *std::max_element(row_norms.begin(), row_norms.end());
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < row_norms.size(); ++i) {
        const bool predicted = top > 0.0 && row_norms[i] > threshold * top;
        const bool actual = static_cast<Eigen::Index>(i) < d_sparse;
        if (predicted && actual) ++tp;
        if (predicted && !actual) ++fp;
        if (!predicted && actual) ++fn;
    }
    if (tp + fp + fn == 0) return 1.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

PathExperiment run_path_experiment(const ExperimentConfig& cfg, const SolverConfig& solver) {
    cfg.validate();
    const SyntheticData synth = synth_generate(cfg);
    Problem problem{Model{synth.data, LossKind::least_squares, row_groups(cfg.d, cfg.k), cfg.q}, 0.0};

    PathExperiment out;
    out.lambda_max = lambda_max(problem.model);
    SolveOptions options;
    for (double ratio : cfg.ratios) {
        MetricsRow row;
        row.ratio = ratio;
        row.lambda = ratio * out.lambda_max;
        problem.lambda = row.lambda;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            SolverResult r = solve(problem, solver, options);
            const auto t1 = std::chrono::steady_clock::now();
            const Matrix w = unflatten_rows(r.W.values(), cfg.d, cfg.k);
            row.frobenius_error = (w - synth.ground_truth).norm();
            row.row_l2_norms.resize(static_cast<std::size_t>(cfg.d));
            for (Eigen::Index i = 0; i < cfg.d; ++i) row.row_l2_norms[static_cast<std::size_t>(i)] = w.row(i).norm();
            row.support_f1 = support_f1(row.row_l2_norms, cfg.d_sparse, cfg.support_threshold);
            row.objective = r.objective;
            row.iterations = r.iterations;
            if (cfg.record_timing) row.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (!r.converged) row.status = "max_iter";
            options.x0 = std::move(r.W);
        } catch (const NumericalError& e) {
            row.status = std::string("failed: ") + e.what();
            std::replace(row.status.begin(), row.status.end(), ',', ';');
            row.frobenius_error = std::nan("");
            row.objective = std::nan("");
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

double balanced_error_rate(std::span<const double> predictions, std::span<const double> labels) {
    if (predictions.size() != labels.size()) throw InvalidArgument("ber: predictions and labels differ in length");
    std::size_t pos = 0;
    std::size_t neg = 0;
    std::size_t pos_wrong = 0;
    std::size_t neg_wrong = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if ((labels[i] != 1.0 && labels[i] != -1.0) || (predictions[i] != 1.0 && predictions[i] != -1.0)) {
            throw InvalidArgument("ber: values must be +1 or -1");
        }
        if (labels[i] > 0.0) {
            ++pos;
            if (predictions[i] < 0.0) ++pos_wrong;
        } else {
            ++neg;
            if (predictions[i] > 0.0) ++neg_wrong;
        }
    }
    if (pos == 0 || neg == 0) throw InvalidArgument("ber: undefined metric, labels contain a single class");
    return 0.5 * (static_cast<double>(pos_wrong) / static_cast<double>(pos) +
                  static_cast<double>(neg_wrong) / static_cast<double>(neg));
}

std::vector<BenchRow> bench_prox(std::span<const Eigen::Index> n_values, Exponent q, double lambda_ratio,
                                 std::uint64_t seed, int repeats, const RootConfig& root) {
    if (!(lambda_ratio > 0.0 && lambda_ratio < 1.0)) throw InvalidArgument("bench: ratio must lie in (0, 1)");
    if (repeats < 1) throw InvalidArgument("bench: repeats must be positive");
    Rng rng(seed);
    const Exponent dual = dual_exponent(q);
    std::vector<BenchRow> rows;
    for (Eigen::Index n : n_values) {
        if (n < 1) throw InvalidArgument("bench: sizes must be positive");
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 - rng.uniform01();  // (0, 1]
        const double lambda = lambda_ratio * q_norm(v, dual);

        std::vector<double> times;
        int iters = 0;
        double sink = 0.0;
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            const ProxResult res = prox_group(v, lambda, q, root);
            const auto t1 = std::chrono::steady_clock::now();
            sink += res.x[0];
            iters = res.diag.outer_iters + res.diag.inner_iters_total;
            times.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
        }
        if (!std::isfinite(sink)) throw NumericalError("bench: non-finite projection");
        std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
        rows.push_back(BenchRow{n, times[times.size() / 2], iters});
    }
    return rows;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, end);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

namespace {

double parse_double(std::string_view token) {
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) token.remove_suffix(1);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw InvalidArgument("csv: cannot parse number '" + std::string(token) + "'");
    }
    return x;
}

}  // namespace

Matrix read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            row.push_back(parse_double(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InvalidArgument("csv: ragged rows (row " + std::to_string(rows.size() + 1) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidArgument("csv: empty matrix");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

std::vector<double> read_numbers(std::istream& in) {
    std::vector<double> out;
    std::string token;
    std::ostringstream all;
    all << in.rdbuf();
    std::string text = all.str();
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream words(text);
    while (words >> token) out.push_back(parse_double(token));
    return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    out << "ratio,lambda,frobenius_error,support_f1,objective,iterations,wall_time_ms,status\n";
    for (const auto& r : rows) {
        out << format_double(r.ratio) << ',' << format_double(r.lambda) << ',' << format_double(r.frobenius_error)
            << ',' << format_double(r.support_f1) << ',' << format_double(r.objective) << ',' << r.iterations << ','
            << format_double(r.wall_time_ms) << ',' << r.status << '\n';
    }
}

void write_row_norms_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    out << "ratio,row,l2_norm\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.row_l2_norms.size(); ++i) {
            out << format_double(r.ratio) << ',' << i << ',' << format_double(r.row_l2_norms[i]) << '\n';
        }
    }
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "n,median_ns,iters\n";
    for (const auto& r : rows) out << r.n << ',' << format_double(r.median_ns) << ',' << r.iters << '\n';
}

}  // namespace glep
