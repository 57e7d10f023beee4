#include "ardnet/cli.hpp"

#include "ardnet/benchmark.hpp"
#include "ardnet/csv.hpp"
#include "ardnet/diagnostics.hpp"
#include "ardnet/errors.hpp"
#include "ardnet/netgen.hpp"
#include "ardnet/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>

namespace ardnet::cli {

namespace {

namespace fs = std::filesystem;

struct EstimateArgs {
    std::string ard;
    std::string traits;
    std::optional<double> lambda;
    double epsilon = 1e-4;
    int max_iterations = 5000;
    bool directed = false;
    bool per_iteration_projection = false;
    bool clamp_one = false;
    bool literal_shrinkage = false;
    std::string out;
    std::uint64_t seed = 0;
};

struct SimulateArgs {
    std::string model;
    long n = 0;
    std::uint64_t seed = 0;
    std::optional<long> k;
    std::string emit = "all";
    std::string out_dir = ".";
    int blocks = 5;
    double theta_within = 0.7;
    double theta_between = 0.3;
};

struct BenchmarkArgs {
    std::string experiment;
    std::vector<std::string> models{"lsm", "rdp", "sbm"};
    std::vector<long> n_values{50, 100};
    long reps = 500;
    std::uint64_t seed = 0;
    std::string out;
    int parallel = 1;
    double epsilon = 1e-4;
    int max_iterations = 5000;
    bool per_iteration_projection = false;
};

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

int estimateCommand(const EstimateArgs& a, std::ostream& out) {
    const Matrix Y = readMatrixCsv(a.ard);
    const Matrix W = readMatrixCsv(a.traits);
    const Problem problem(Y, W);

    SolverConfig config;
    config.lambda = a.lambda.value_or(
        defaultPenalty(problem.surveyed(), problem.population(), problem.traitCount()));
    config.epsilon = a.epsilon;
    config.max_iterations = a.max_iterations;
    config.constraint_mode =
        a.directed ? ConstraintMode::Unconstrained : ConstraintMode::UndirectedNoSelfLinks;
    config.per_iteration_projection = a.per_iteration_projection;
    config.clamp_upper_at_one = a.clamp_one;
    config.shrinkage = a.literal_shrinkage ? ShrinkageRule::Literal : ShrinkageRule::StepScaled;

    const SolverResult result = fit(problem, config);
    if (!a.out.empty()) writeMatrixCsv(result.estimate, a.out);

    out << "iterations=" << result.iterations_used
        << " converged=" << (result.converged ? "true" : "false")
        << " objective=" << fmt("%.10g", result.final_objective)
        << " lambda=" << fmt("%.10g", config.lambda)
        << " final_change=" << fmt("%.3e", result.final_change) << '\n';

    // Network statistics of the surveyed block, from a graph drawn from the
    // estimate (clamped into [0,1] for sampling).
    const Matrix block = surveyedBlock(result.estimate);
    const std::vector<double> degrees = expectedDegrees(block);
    const double mean_degree =
        std::accumulate(degrees.begin(), degrees.end(), 0.0) / static_cast<double>(degrees.size());
    Matrix probabilities = block.cwiseMax(0.0).cwiseMin(1.0);
    const Matrix sampled = sampleAdjacency(probabilities, Seed{a.seed});
    out << "mean_expected_degree=" << fmt("%.6g", mean_degree)
        << " sampled_clustering=" << fmt("%.6g", globalClustering(sampled)) << '\n';
    return kSuccess;
}

int simulateCommand(const SimulateArgs& a, std::ostream& out) {
    NetworkModelSpec spec{parseModel(a.model), a.n, a.blocks, a.theta_within, a.theta_between};
    spec.validate();
    const long k = a.k.value_or(defaultTraitCount(a.n));
    if (k < 1) throw InvalidInput("--k must be positive");

    const bool all = a.emit == "all";
    const bool want_m = all || a.emit == "probabilities";
    const bool want_g = all || a.emit == "adjacency";
    const bool want_w = all || a.emit == "traits";
    const bool want_y = all || a.emit == "ard";

    const fs::path dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    // Same seed derivation as the benchmark pipeline.
    const Seed seed{a.seed};
    const Matrix truth = probabilityMatrix(spec, deriveSeed(seed, {1}));
    if (want_m) writeMatrixCsv(truth, dir / "m_star.csv");
    if (want_g || want_y) {
        const Matrix graph = sampleAdjacency(truth, deriveSeed(seed, {2}));
        if (want_g) writeMatrixCsv(graph, dir / "g_star.csv");
        if (want_w || want_y) {
            const Matrix traits = generateTraits(k, a.n, deriveSeed(seed, {3}));
            if (want_w) writeMatrixCsv(traits, dir / "w.csv");
            if (want_y) writeMatrixCsv(generateArd(graph, traits), dir / "y.csv");
        }
    } else if (want_w) {
        writeMatrixCsv(generateTraits(k, a.n, deriveSeed(seed, {3})), dir / "w.csv");
    }
    out << "model=" << modelName(spec.model) << " n=" << a.n << " K=" << k
        << " seed=" << a.seed << " out_dir=" << dir.string() << '\n';
    return kSuccess;
}

int benchmarkCommand(const BenchmarkArgs& a, std::ostream& out) {
    BenchmarkOptions options;
    options.experiment = parseExperiment(a.experiment);
    for (const auto& m : a.models) {
        const NetworkModel model = parseModel(m);
        if (std::find(options.models.begin(), options.models.end(), model) == options.models.end())
            options.models.push_back(model);
    }
    options.n_values = a.n_values;
    options.replications = a.reps;
    options.master_seed = Seed{a.seed};
    options.parallel = a.parallel;
    options.solver.epsilon = a.epsilon;
    options.solver.max_iterations = a.max_iterations;
    options.solver.per_iteration_projection = a.per_iteration_projection;

    const BenchmarkReport report = runBenchmark(options);
    const std::string records = reportJsonLines(report);
    out << renderTable(report);
    if (a.out.empty()) {
        out << records;
    } else {
        std::ofstream file(a.out, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot open " + a.out + " for writing");
        file << records;
        if (!file.flush()) throw IoError("failed writing " + a.out);
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Recover link probabilities of a network from aggregated relational data",
                 "ardnet"};
    app.require_subcommand(1);

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Fit the nuclear-norm penalized estimator");
    estimate->add_option("--ard", est.ard, "K x N1 ARD counts (CSV)")->required();
    estimate->add_option("--traits", est.traits, "K x N2 trait indicators (CSV)")->required();
    estimate->add_option("--lambda", est.lambda, "Penalty; default 2(sqrt N1 + sqrt N2 + 1)(sqrt N2 + sqrt K)")
        ->check(CLI::NonNegativeNumber);
    estimate->add_option("--epsilon", est.epsilon, "Stopping threshold on ||M_prev - M||_F")
        ->check(CLI::PositiveNumber);
    estimate->add_option("--max-iter", est.max_iterations, "Iteration cap")->check(CLI::PositiveNumber);
    estimate->add_flag("--directed", est.directed, "Skip the undirected/no-self-link projection");
    estimate->add_flag("--per-iter-projection", est.per_iteration_projection,
                       "Project after every gradient step, not only at the ends");
    estimate->add_flag("--clamp-one", est.clamp_one, "Cap estimated probabilities at 1");
    estimate->add_flag("--literal-shrinkage", est.literal_shrinkage,
                       "Shrink singular values by lambda instead of lambda/L");
    estimate->add_option("--out", est.out, "Where to write the N2 x N1 estimate (CSV)");
    estimate->add_option("--seed", est.seed, "Seed for the graph sampled from the estimate");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a network and its ARD");
    simulate->add_option("--model", sim.model, "Network formation model")
        ->required()
        ->check(CLI::IsMember({"lsm", "rdp", "sbm"}, CLI::ignore_case));
    simulate->add_option("--n", sim.n, "Number of agents")->required()->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Master seed")->required();
    simulate->add_option("--k", sim.k, "Number of traits; default round(sqrt n)")->check(CLI::PositiveNumber);
    simulate->add_option("--emit", sim.emit, "probabilities, adjacency, traits, ard or all")
        ->check(CLI::IsMember({"probabilities", "adjacency", "traits", "ard", "all"}));
    simulate->add_option("--out-dir", sim.out_dir, "Output directory");
    simulate->add_option("--blocks", sim.blocks, "SBM: number of types")->check(CLI::PositiveNumber);
    simulate->add_option("--theta-within", sim.theta_within, "SBM: within-type link probability")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--theta-between", sim.theta_between, "SBM: between-type link probability")
        ->check(CLI::Range(0.0, 1.0));

    BenchmarkArgs bench;
    auto* benchmark = app.add_subcommand("benchmark", "Monte Carlo effective-rank or MSE study");
    benchmark->add_option("--experiment", bench.experiment, "effective-rank or mse")
        ->required()
        ->check(CLI::IsMember({"effective-rank", "mse"}));
    benchmark->add_option("--models", bench.models, "Comma-separated models")
        ->delimiter(',')
        ->check(CLI::IsMember({"lsm", "rdp", "sbm"}, CLI::ignore_case));
    benchmark->add_option("--n", bench.n_values, "Comma-separated network sizes")->delimiter(',');
    benchmark->add_option("--reps", bench.reps, "Replications per cell")->check(CLI::PositiveNumber);
    benchmark->add_option("--seed", bench.seed, "Master seed");
    benchmark->add_option("--out", bench.out, "Write JSON-lines records here instead of stdout");
    benchmark->add_option("--parallel", bench.parallel, "Worker threads")->check(CLI::PositiveNumber);
    benchmark->add_option("--epsilon", bench.epsilon, "mse: solver stopping threshold")
        ->check(CLI::PositiveNumber);
    benchmark->add_option("--max-iter", bench.max_iterations, "mse: solver iteration cap")
        ->check(CLI::PositiveNumber);
    benchmark->add_flag("--per-iter-projection", bench.per_iteration_projection,
                        "mse: project after every gradient step");

    try {
        // CLI11 wants the arguments reversed when given as a vector.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*estimate) return estimateCommand(est, out);
        if (*simulate) return simulateCommand(sim, out);
        return benchmarkCommand(bench, out);
    } catch (const SingularSystem& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const NumericalFailure& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const UndefinedRatio& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        // InvalidInput, ParseError, IoError.
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace ardnet::cli
