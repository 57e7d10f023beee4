#pragma once

#include "ardnet/netgen.hpp"
#include "ardnet/random.hpp"
#include "ardnet/solver.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ardnet {

enum class Experiment {
    EffectiveRank,
    Mse,
};

std::string_view experimentName(Experiment e) noexcept;  // "effective-rank", "mse"
Experiment parseExperiment(std::string_view name);

/// Seed of replication `rep` for (experiment, model, n). Independent of
/// scheduling, so results do not depend on the worker count.
Seed replicationSeed(Seed master, Experiment e, NetworkModel model, long n, long rep) noexcept;

/// One draw of the estimation pipeline: M* from the model, G ~ M*,
/// W ~ Bernoulli(0.5) with K traits, Y = W G, then the penalized fit with
/// lambda from defaultPenalty(n, n, K).
struct PipelineOutcome {
    Matrix truth;
    Matrix estimate;
    long k = 0;
    double lambda = 0.0;
    double mse = 0.0;
    double relative_error = 0.0;
    double theoretical_bound = 0.0;
    double bound_probability = 0.0;
    int iterations = 0;
    bool converged = false;
    double fit_seconds = 0.0;
};

/// `solver.lambda` is ignored and replaced by the default penalty;
/// `k` defaults to defaultTraitCount(n).
PipelineOutcome runPipeline(NetworkModel model, long n, Seed seed, const SolverConfig& solver,
                            std::optional<long> k = std::nullopt);

struct BenchmarkOptions {
    Experiment experiment = Experiment::EffectiveRank;
    std::vector<NetworkModel> models;
    std::vector<long> n_values;
    long replications = 500;
    Seed master_seed{};
    int parallel = 1;
    SolverConfig solver;  // mse experiment only; lambda is per-cell
};

struct BenchmarkCell {
    Experiment experiment = Experiment::EffectiveRank;
    NetworkModel model = NetworkModel::LatentSpace;
    long n = 0;
    std::optional<long> k;  // mse only
    long replications = 0;
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;
    // effective-rank: mean and standard error of ||M*||_nuc / ||M*||_F.
    std::optional<double> ratio_mean;
    std::optional<double> ratio_standard_error;
    // mse: solver health.
    std::optional<long> nonconverged;
    std::optional<double> mean_iterations;
};

struct BenchmarkReport {
    Experiment experiment = Experiment::EffectiveRank;
    long replications = 0;
    std::uint64_t master_seed = 0;
    std::vector<BenchmarkCell> cells;
};

BenchmarkReport runBenchmark(const BenchmarkOptions& options);

/// One JSON object per line, one line per cell.
std::string reportJsonLines(const BenchmarkReport& report);
std::string renderTable(const BenchmarkReport& report);

/// Sample mean and standard error (sd / sqrt(count); 0 for one value).
struct MeanSe {
    double mean;
    double se;
};
MeanSe meanAndStandardError(const std::vector<double>& values);

}  // namespace ardnet
