// glep: command-line front end for the projection, solver and experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "glep/errors.hpp"
#include "glep/experiment.hpp"
#include "glep/projection.hpp"
#include "glep/reference_oracle.hpp"
#include "glep/solver.hpp"

using namespace glep;
using json = nlohmann::json;

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kNumericalError = 3 };

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open '" + path + "' for reading");
    return in;
}

// "-" selects stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw InvalidArgument("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw InvalidArgument("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<double> read_vector(const std::string& path) {
    if (path == "-") return read_numbers(std::cin);
    std::ifstream in = open_in(path);
    return read_numbers(in);
}

Matrix read_matrix(const std::string& path) {
    std::ifstream in = open_in(path);
    return read_matrix_csv(in);
}

Vector to_vector(const std::vector<double>& xs) {
    return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

Exponent exponent_from_json(const json& j) {
    if (j.is_string()) return Exponent::parse(j.get<std::string>());
    if (j.is_number()) return Exponent::finite(j.get<double>());
    throw InvalidArgument("sidecar: q must be a number or \"inf\"");
}

Groups groups_from_json(const json& j, Eigen::Index d, Eigen::Index k) {
    if (j.is_null() || (j.is_string() && j.get<std::string>() == "rows")) return row_groups(d, k);
    if (!j.is_array()) throw InvalidArgument("sidecar: groups must be \"rows\" or an array of sizes");
    std::vector<Eigen::Index> offsets{0};
    for (const json& s : j) {
        if (!s.is_number_integer() || s.get<long long>() < 1) {
            throw InvalidArgument("sidecar: group sizes must be positive integers");
        }
        offsets.push_back(offsets.back() + static_cast<Eigen::Index>(s.get<long long>()));
    }
    return Groups(std::move(offsets));
}

struct Options {
    std::string q = "2";
    std::optional<double> lambda;
    std::optional<double> ratio;
    std::uint64_t seed = 1;
    double delta = 1e-8;
    std::string out = "-";
};

RootConfig root_config(const Options& o) {
    RootConfig cfg;
    cfg.delta = o.delta;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App& cmd, Options& o, bool needs_q = true) {
    if (needs_q) cmd.add_option("--q", o.q, "norm exponent: a number >= 1 or inf")->capture_default_str();
    cmd.add_option("--delta", o.delta, "bisection tolerance")->capture_default_str();
    cmd.add_option("--out", o.out, "output file, - for stdout")->capture_default_str();
}

void add_experiment(CLI::App& cmd, ExperimentConfig& e, std::string& dist) {
    cmd.add_option("--m", e.m, "samples")->capture_default_str();
    cmd.add_option("--d", e.d, "features")->capture_default_str();
    cmd.add_option("--dsparse", e.d_sparse, "nonzero rows of the planted model")->capture_default_str();
    cmd.add_option("--k", e.k, "tasks")->capture_default_str();
    cmd.add_option("--sigma", e.sigma, "noise standard deviation")->capture_default_str();
    cmd.add_option("--dist", dist, "planted nonzero distribution")
        ->check(CLI::IsMember({"uniform", "normal"}))
        ->capture_default_str();
}

int run_prox(const Options& o, const std::string& input, Eigen::Index group_size) {
    const Vector v = to_vector(read_vector(input));
    if (v.size() == 0) throw InvalidArgument("prox: empty input vector");
    if (!o.lambda) throw InvalidArgument("prox: --lambda is required");
    const Exponent q = Exponent::parse(o.q);
    const Eigen::Index s = group_size > 0 ? group_size : v.size();
    if (v.size() % s != 0) throw InvalidArgument("prox: vector length is not a multiple of --group-size");
    const GroupedVector x = prox_grouped(GroupedVector(v, Groups::uniform(v.size() / s, s)), *o.lambda, q,
                                         root_config(o));
    Output out(o.out);
    write_matrix_csv(out.stream(), Matrix(x.values().transpose()));
    out.finish();
    return kOk;
}

int run_solve(const Options& o, const std::string& a_path, const std::string& y_path,
              const std::string& sidecar_path, int max_iter, double rel_tol) {
    Dataset data{read_matrix(a_path), read_matrix(y_path)};
    json side = json::object();
    if (!sidecar_path.empty()) {
        std::ifstream in = open_in(sidecar_path);
        try {
            side = json::parse(in);
        } catch (const json::exception& e) {
            throw InvalidArgument(std::string("sidecar: ") + e.what());
        }
        if (!side.is_object()) throw InvalidArgument("sidecar: expected a JSON object");
    }
    try {
        Model model;
        model.data = std::move(data);
        model.kind = parse_loss_kind(side.value("loss", std::string("least_squares")));
        model.q = side.contains("q") ? exponent_from_json(side["q"]) : Exponent::parse(o.q);
        model.groups = groups_from_json(side.value("groups", json()), model.features(), model.tasks());
        model.validate();

        std::optional<double> lambda = o.lambda;
        std::optional<double> ratio = o.ratio;
        if (!lambda && !ratio) {
            if (side.contains("lambda")) lambda = side["lambda"].get<double>();
            if (side.contains("lambda_ratio")) ratio = side["lambda_ratio"].get<double>();
        }
        if (lambda && ratio) throw InvalidArgument("solve: give either lambda or a ratio, not both");
        if (!lambda && !ratio) throw InvalidArgument("solve: --lambda or --ratio is required");
        const double lmax = lambda_max(model);
        const double lam = lambda ? *lambda : *ratio * lmax;

        SolverConfig cfg;
        cfg.max_iter = max_iter;
        cfg.rel_tol = rel_tol;
        cfg.root = root_config(o);
        const SolverResult r = solve(Problem{model, lam}, cfg);

        Output out(o.out);
        write_matrix_csv(out.stream(), unflatten_rows(r.W.values(), model.features(), model.tasks()));
        out.finish();
        const json summary = {{"loss", to_string(model.kind)}, {"q", model.q.to_string()},
                              {"lambda", lam},              {"lambda_max", lmax},
                              {"objective", r.objective},   {"iterations", r.iterations},
                              {"converged", r.converged}};
        std::cerr << summary.dump() << '\n';
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("sidecar: ") + e.what());
    }
    return kOk;
}

int run_path(const Options& o, ExperimentConfig e, const std::string& dist, double base, int points,
             const std::string& norms_out, bool no_timing, int max_iter) {
    e.nonzero_dist = parse_dist(dist);
    e.seed = o.seed;
    e.q = Exponent::parse(o.q);
    e.ratios = ExperimentConfig::geometric_ratios(base, points);
    e.record_timing = !no_timing;
    SolverConfig cfg;
    cfg.max_iter = max_iter;
    cfg.root = root_config(o);
    const PathExperiment run = run_path_experiment(e, cfg);

    Output out(o.out);
    write_metrics_csv(out.stream(), run.rows);
    out.finish();
    if (!norms_out.empty()) {
        Output norms(norms_out);
        write_row_norms_csv(norms.stream(), run.rows);
        norms.finish();
    }
    std::size_t failed = 0;
    for (const auto& row : run.rows) failed += row.status.rfind("failed", 0) == 0 ? 1 : 0;
    std::cerr << json{{"lambda_max", run.lambda_max}, {"points", run.rows.size()}, {"failed", failed}}.dump()
              << '\n';
    return failed == 0 ? kOk : kNumericalError;
}

int run_synth(const Options& o, ExperimentConfig e, const std::string& dist, const std::string& prefix) {
    e.nonzero_dist = parse_dist(dist);
    e.seed = o.seed;
    e.validate();
    const SyntheticData s = synth_generate(e);
    const std::pair<const char*, const Matrix*> parts[] = {
        {"_A.csv", &s.data.design}, {"_Y.csv", &s.data.targets}, {"_Xstar.csv", &s.ground_truth}};
    for (const auto& [suffix, m] : parts) {
        Output out(prefix + suffix);
        write_matrix_csv(out.stream(), *m);
        out.finish();
    }
    return kOk;
}

int run_bench(const Options& o, const std::vector<long long>& sizes, int repeats) {
    std::vector<Eigen::Index> n;
    for (long long s : sizes) n.push_back(static_cast<Eigen::Index>(s));
    const double ratio = o.ratio.value_or(0.5);
    const auto rows = bench_prox(n, Exponent::parse(o.q), ratio, o.seed, repeats, root_config(o));
    Output out(o.out);
    write_bench_csv(out.stream(), rows);
    out.finish();
    return kOk;
}

int run_demo(const Options& o, const std::vector<double>& v_in, int iters, double tol) {
    const Vector v = to_vector(v_in);
    const double lambda = o.lambda.value_or(0.5);
    const double q = std::stod(o.q);
    const auto trace = oracle::fixed_point_trace(v, lambda, q, v, iters);
    Output out(o.out);
    out.stream() << "t";
    for (Eigen::Index i = 0; i < v.size(); ++i) out.stream() << ",x" << (i + 1);
    out.stream() << '\n';
    for (std::size_t t = 0; t < trace.iterates.size(); ++t) {
        out.stream() << t;
        for (Eigen::Index i = 0; i < v.size(); ++i) out.stream() << ',' << format_double(trace.iterates[t][i]);
        out.stream() << '\n';
    }
    out.finish();
    const int settled = oracle::first_settled_step(trace, tol);
    const ProxResult p = prox_lq_general(v, lambda, q, root_config(o));
    std::vector<double> x(p.x.data(), p.x.data() + p.x.size());
    std::cerr << json{{"lambda", lambda},
                      {"q", q},
                      {"fixed_point_settled_step", settled},
                      {"truncated", trace.truncated},
                      {"prox", x},
                      {"prox_residual", p.diag.residual}}
                     .dump()
              << '\n';
    return kOk;
}

int run_ber(const std::string& pred, const std::string& labels) {
    const auto p = read_vector(pred);
    const auto l = read_vector(labels);
    std::cout << format_double(balanced_error_rate(p, l)) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-sparse projections and the accelerated l1/lq solver"};
    app.require_subcommand(1);
    Options o;

    std::string input = "-";
    Eigen::Index group_size = 0;
    auto* prox = app.add_subcommand("prox", "project a vector read from a file or stdin");
    add_common(*prox, o);
    prox->add_option("--lambda", o.lambda, "regularization weight")->required();
    prox->add_option("--input", input, "input vector, - for stdin")->capture_default_str();
    prox->add_option("--group-size", group_size, "project consecutive groups of this size (default: one group)");

    std::string a_path, y_path, sidecar;
    int max_iter = 10000;
    double rel_tol = 1e-10;
    auto* solve_cmd = app.add_subcommand("solve", "solve the l1/lq regularized problem on CSV data");
    add_common(*solve_cmd, o);
    solve_cmd->add_option("--design", a_path, "headerless CSV design matrix A (m x d)")->required();
    solve_cmd->add_option("--targets", y_path, "headerless CSV targets Y (m x k)")->required();
    solve_cmd->add_option("--sidecar", sidecar, "JSON with loss, q, lambda or lambda_ratio, groups");
    solve_cmd->add_option("--lambda", o.lambda, "regularization weight");
    solve_cmd->add_option("--ratio", o.ratio, "lambda as a fraction of lambda_max");
    solve_cmd->add_option("--max-iter", max_iter, "iteration limit")->capture_default_str();
    solve_cmd->add_option("--rel-tol", rel_tol, "relative objective change tolerance")->capture_default_str();

    ExperimentConfig exp;
    std::string dist = "normal";
    double base = 0.9;
    int points = 100;
    std::string norms_out;
    bool no_timing = false;
    auto* path = app.add_subcommand("path", "warm-started path on synthetic multi-task data, metrics as CSV");
    add_common(*path, o);
    add_experiment(*path, exp, dist);
    path->add_option("--seed", o.seed, "random seed")->capture_default_str();
    path->add_option("--ratio", base, "geometric ratio between path points")->capture_default_str();
    path->add_option("--points", points, "number of path points")->capture_default_str();
    path->add_option("--threshold", exp.support_threshold, "support threshold relative to the largest row norm")
        ->capture_default_str();
    path->add_option("--norms-out", norms_out, "CSV of per-row l2 norms at every point");
    path->add_flag("--no-timing", no_timing, "write 0 for wall times so the CSV is byte-reproducible");
    path->add_option("--max-iter", max_iter, "iteration limit per point")->capture_default_str();

    std::string prefix = "synth";
    auto* synth = app.add_subcommand("synth", "write A, Y and X* of a synthetic instance as CSV");
    add_experiment(*synth, exp, dist);
    synth->add_option("--seed", o.seed, "random seed")->capture_default_str();
    synth->add_option("--out", prefix, "file prefix: <prefix>_A.csv, <prefix>_Y.csv, <prefix>_Xstar.csv")
        ->capture_default_str();

    std::vector<long long> sizes{1000, 10000, 100000};
    int repeats = 21;
    auto* bench = app.add_subcommand("bench", "median projection time by vector length");
    add_common(*bench, o);
    bench->add_option("--n", sizes, "vector lengths")->capture_default_str();
    bench->add_option("--ratio", o.ratio, "lambda as a fraction of the dual norm (default 0.5)");
    bench->add_option("--seed", o.seed, "random seed")->capture_default_str();
    bench->add_option("--repeats", repeats, "timed runs per size")->capture_default_str();

    std::vector<double> demo_v{1.0, 3.0};
    int iters = 100;
    double tol = 1e-6;
    std::string demo_q = "3";
    auto* demo = app.add_subcommand("demo-fixed-point", "trace of the naive fixed-point map next to the projection");
    add_common(*demo, o, false);
    demo->add_option("--q", demo_q, "norm exponent, finite and > 1")->capture_default_str();
    demo->add_option("--lambda", o.lambda, "regularization weight (default 0.5)");
    demo->add_option("--v", demo_v, "input vector, also the starting point")->delimiter(',')->capture_default_str();
    demo->add_option("--iters", iters, "iterations")->capture_default_str();
    demo->add_option("--tol", tol, "step tolerance for the settled-step report")->capture_default_str();

    std::string pred, labels;
    auto* ber = app.add_subcommand("ber", "balanced error rate of +-1 predictions");
    ber->add_option("--pred", pred, "predictions file")->required();
    ber->add_option("--labels", labels, "labels file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: input: " << e.what() << '\n';
        return kInputError;
    }
    if (demo->parsed()) o.q = demo_q;

    try {
        if (prox->parsed()) return run_prox(o, input, group_size);
        if (solve_cmd->parsed()) return run_solve(o, a_path, y_path, sidecar, max_iter, rel_tol);
        if (path->parsed()) return run_path(o, exp, dist, base, points, norms_out, no_timing, max_iter);
        if (synth->parsed()) return run_synth(o, exp, dist, prefix);
        if (bench->parsed()) return run_bench(o, sizes, repeats);
        if (demo->parsed()) return run_demo(o, demo_v, iters, tol);
        if (ber->parsed()) return run_ber(pred, labels);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: input: " << e.what() << '\n';
        return kInputError;
    } catch (const NumericalError& e) {
        std::cerr << "error: numerical: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: input: " << e.what() << '\n';
        return kInputError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: input: " << e.what() << '\n';
        return kInputError;
    }
    return kOk;
}
