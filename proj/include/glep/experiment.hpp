#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "glep/core_types.hpp"
#include "glep/losses.hpp"
#include "glep/solver.hpp"

namespace glep {

// mt19937_64 with hand-written uniform and normal transforms, so streams are
// identical on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform01();  // [0, 1), 53 random bits
    double normal();     // standard normal, Marsaglia polar method

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class NonzeroDist { uniform01, standard_normal };
NonzeroDist parse_dist(const std::string& text);
std::string to_string(NonzeroDist dist);

struct ExperimentConfig {
    Eigen::Index m = 100;
    Eigen::Index d = 200;
    Eigen::Index d_sparse = 50;
    Eigen::Index k = 50;
    double sigma = 0.1;
    NonzeroDist nonzero_dist = NonzeroDist::standard_normal;
    std::uint64_t seed = 1;
    Exponent q = Exponent::finite(2.0);
    std::vector<double> ratios = geometric_ratios(0.9, 100);
    double support_threshold = 1e-3;  // relative to the largest row norm
    bool record_timing = true;

    static std::vector<double> geometric_ratios(double base, int count);
    void validate() const;
};

struct SyntheticData {
    Dataset data;
    Matrix ground_truth;  // d x k, rows d_sparse.. are exactly zero
};

// A ~ N(0,1), X* rows [0, d_sparse) from the configured distribution, Y = A X* + sigma Z.
SyntheticData synth_generate(const ExperimentConfig& cfg);

struct MetricsRow {
    double ratio = 0.0;
    double lambda = 0.0;
    double frobenius_error = 0.0;
    double support_f1 = 0.0;
    std::vector<double> row_l2_norms;
    double objective = 0.0;
    int iterations = 0;
    double wall_time_ms = 0.0;
    std::string status = "ok";
};

// F1 of the predicted row support (norm > threshold * max norm) against rows [0, d_sparse).
double support_f1(std::span<const double> row_norms, Eigen::Index d_sparse, double threshold);

struct PathExperiment {
    double lambda_max = 0.0;
    std::vector<MetricsRow> rows;
};

// Warm-started path over cfg.ratios; a failed point is recorded and the run
// continues from the last good solution.
PathExperiment run_path_experiment(const ExperimentConfig& cfg, const SolverConfig& solver = {});

// Mean of the per-class error rates; labels must contain both classes.
double balanced_error_rate(std::span<const double> predictions, std::span<const double> labels);

struct BenchRow {
    Eigen::Index n;
    double median_ns;
    int iters;  // outer plus inner bisection steps of one call
};

std::vector<BenchRow> bench_prox(std::span<const Eigen::Index> n_values, Exponent q, double lambda_ratio,
                                 std::uint64_t seed, int repeats = 21, const RootConfig& root = {});

// CSV helpers: headerless numeric matrices, '.' decimal point, shortest round-trip digits.
std::string format_double(double x);
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in);
std::vector<double> read_numbers(std::istream& in);
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_row_norms_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace glep
