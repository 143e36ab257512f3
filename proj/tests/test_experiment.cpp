#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "glep/experiment.hpp"

using namespace glep;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.m = 30;
    cfg.d = 20;
    cfg.d_sparse = 5;
    cfg.k = 4;
    cfg.ratios = ExperimentConfig::geometric_ratios(0.8, 12);
    cfg.record_timing = false;
    return cfg;
}

}  // namespace

TEST_CASE("rng streams are fixed") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        const double u = a.uniform01();
        CHECK(u == b.uniform01());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    double sum = 0.0, sq = 0.0;
    Rng n(7);
    for (int i = 0; i < 20000; ++i) {
        const double z = n.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / 20000) < 0.03);
    CHECK(std::abs(sq / 20000 - 1.0) < 0.05);
}

TEST_CASE("distribution names") {
    CHECK(parse_dist("uniform") == NonzeroDist::uniform01);
    CHECK(parse_dist("normal") == NonzeroDist::standard_normal);
    CHECK(to_string(NonzeroDist::uniform01) == "uniform");
    CHECK_THROWS_AS(parse_dist("cauchy"), InvalidArgument);
}

TEST_CASE("experiment config validation") {
    ExperimentConfig cfg = small_config();
    cfg.d_sparse = 21;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = small_config();
    cfg.sigma = -1;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = small_config();
    cfg.ratios = {0.5, 0.6};
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    const auto r = ExperimentConfig::geometric_ratios(0.9, 3);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == 1.0);
    CHECK(r[2] == doctest::Approx(0.81).epsilon(1e-15));
}

TEST_CASE("synthetic data") {
    ExperimentConfig cfg;
    const SyntheticData s = synth_generate(cfg);
    CHECK(s.data.design.rows() == 100);
    CHECK(s.data.design.cols() == 200);
    CHECK(s.data.targets.rows() == 100);
    CHECK(s.data.targets.cols() == 50);
    CHECK(s.ground_truth.rows() == 200);
    CHECK(s.ground_truth.cols() == 50);
    int nonzero_rows = 0;
    for (Eigen::Index i = 0; i < 200; ++i) nonzero_rows += s.ground_truth.row(i).isZero(0.0) ? 0 : 1;
    CHECK(nonzero_rows == 50);
    CHECK(s.ground_truth.bottomRows(150).isZero(0.0));

    const SyntheticData again = synth_generate(cfg);
    CHECK(again.data.design == s.data.design);
    CHECK(again.data.targets == s.data.targets);
    CHECK(again.ground_truth == s.ground_truth);

    cfg.sigma = 0.0;
    const SyntheticData clean = synth_generate(cfg);
    CHECK(clean.data.targets == clean.data.design * clean.ground_truth);

    cfg.nonzero_dist = NonzeroDist::uniform01;
    const SyntheticData uni = synth_generate(cfg);
    CHECK(uni.ground_truth.topRows(50).minCoeff() >= 0.0);
    CHECK(uni.ground_truth.topRows(50).maxCoeff() < 1.0);
}

TEST_CASE("support f1") {
    const std::vector<double> exact{3, 2, 1, 0, 0};
    CHECK(support_f1(exact, 3, 1e-3) == 1.0);
    const std::vector<double> extra{3, 2, 1, 0.5, 0};
    CHECK(support_f1(extra, 3, 1e-3) == doctest::Approx(6.0 / 7.0));
    const std::vector<double> zero{0, 0, 0};
    CHECK(support_f1(zero, 2, 1e-3) == 0.0);
}

TEST_CASE("balanced error rate") {
    const std::vector<double> labels{1, 1, -1, -1, -1, 1};
    CHECK(balanced_error_rate(labels, labels) == 0.0);
    const std::vector<double> all_pos(6, 1.0);
    CHECK(balanced_error_rate(all_pos, labels) == 0.5);
    const std::vector<double> some{1, -1, -1, 1, -1, 1};
    const double b = balanced_error_rate(some, labels);
    std::vector<double> flipped(some);
    for (double& p : flipped) p = -p;
    CHECK(balanced_error_rate(flipped, labels) == doctest::Approx(1.0 - b));
    const std::vector<double> one_class(6, -1.0);
    CHECK_THROWS_AS(balanced_error_rate(labels, one_class), InvalidArgument);
    const std::vector<double> short_preds{1, 1};
    CHECK_THROWS_AS(balanced_error_rate(short_preds, labels), InvalidArgument);
    const std::vector<double> not_signs{0.5, 1, -1, -1, -1, 1};
    CHECK_THROWS_AS(balanced_error_rate(not_signs, labels), InvalidArgument);
}

TEST_CASE("path experiment on a small instance") {
    const ExperimentConfig cfg = small_config();
    const PathExperiment run = run_path_experiment(cfg);
    REQUIRE(run.rows.size() == cfg.ratios.size());
    const SyntheticData s = synth_generate(cfg);
    CHECK(run.rows[0].frobenius_error == doctest::Approx(s.ground_truth.norm()).epsilon(1e-12));
    double best = run.rows[0].frobenius_error;
    for (const auto& row : run.rows) {
        CHECK(row.status == "ok");
        CHECK(row.wall_time_ms == 0.0);
        CHECK(row.support_f1 >= 0.0);
        CHECK(row.support_f1 <= 1.0);
        CHECK(row.row_l2_norms.size() == 20);
        best = std::min(best, row.frobenius_error);
    }
    CHECK(best < run.rows[0].frobenius_error);

    std::ostringstream a, b;
    write_metrics_csv(a, run.rows);
    write_metrics_csv(b, run_path_experiment(cfg).rows);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("ratio,lambda,frobenius_error,support_f1,objective,iterations,wall_time_ms,status\n", 0) == 0);
}

TEST_CASE("csv helpers") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    CHECK(format_double(3.0) == "3");
    Matrix m(2, 3);
    m << 0.1, -1e-20, 3, 1.0 / 3.0, 2e10, -0.0;
    std::ostringstream out;
    write_matrix_csv(out, m);
    std::istringstream in(out.str());
    CHECK(read_matrix_csv(in) == m);

    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(read_matrix_csv(ragged), InvalidArgument);
    std::istringstream junk("1,x\n");
    CHECK_THROWS_AS(read_matrix_csv(junk), InvalidArgument);
    std::istringstream numbers("1, 2\n3\n  4.5 ");
    const auto xs = read_numbers(numbers);
    REQUIRE(xs.size() == 4);
    CHECK(xs[3] == 4.5);
}

TEST_CASE("bench prox") {
    const std::vector<Eigen::Index> sizes{1, 100};
    const auto rows = bench_prox(sizes, Exponent::finite(3.0), 0.5, 1, 3);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].n == 1);
    CHECK(rows[0].median_ns < 1e6);
    CHECK(rows[1].iters > 0);
    std::ostringstream out;
    write_bench_csv(out, rows);
    CHECK(out.str().rfind("n,median_ns,iters\n", 0) == 0);
    CHECK_THROWS_AS(bench_prox(sizes, Exponent::finite(3.0), 1.5, 1), InvalidArgument);
}
