#include "ardnet/benchmark.hpp"

#include "ardnet/diagnostics.hpp"
#include "ardnet/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace ardnet {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(i) for i in [0, count) on `workers` threads. The first exception
// is rethrown after all workers stop.
template <class Body>
void parallelFor(long count, int workers, Body&& body) {
    workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<long>(count, 1 << 20))));
    if (workers == 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (long i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string_view experimentName(Experiment e) noexcept {
    return e == Experiment::EffectiveRank ? "effective-rank" : "mse";
}

Experiment parseExperiment(std::string_view name) {
    if (name == "effective-rank") return Experiment::EffectiveRank;
    if (name == "mse") return Experiment::Mse;
    throw InvalidInput("unknown experiment '" + std::string(name) +
                       "' (expected effective-rank or mse)");
}

Seed replicationSeed(Seed master, Experiment e, NetworkModel model, long n, long rep) noexcept {
    return deriveSeed(master, {static_cast<std::uint64_t>(e), static_cast<std::uint64_t>(model),
                               static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)});
}

PipelineOutcome runPipeline(NetworkModel model, long n, Seed seed, const SolverConfig& solver,
                            std::optional<long> k) {
    PipelineOutcome out;
    out.k = k.value_or(defaultTraitCount(n));
    if (out.k < 1) throw InvalidInput("trait count must be positive");

    out.truth = probabilityMatrix(NetworkModelSpec{model, n}, deriveSeed(seed, {1}));
    const Matrix graph = sampleAdjacency(out.truth, deriveSeed(seed, {2}));
    const Matrix traits = generateTraits(out.k, n, deriveSeed(seed, {3}));
    const Problem problem(generateArd(graph, traits), traits);

    SolverConfig config = solver;
    out.lambda = defaultPenalty(n, n, out.k);
    config.lambda = out.lambda;

    const auto start = Clock::now();
    SolverResult fitted = fit(problem, config);
    out.fit_seconds = secondsSince(start);

    out.estimate = std::move(fitted.estimate);
    out.iterations = fitted.iterations_used;
    out.converged = fitted.converged;
    out.mse = mse(out.estimate, out.truth);
    out.relative_error = relativeFrobeniusError(out.estimate, out.truth);
    // Traits are Bernoulli(0.5) by design, so nu = 0.25.
    constexpr double nu = 0.25;
    out.theoretical_bound = theoreticalBound(out.truth, out.lambda, nu, out.k);
    out.bound_probability = boundProbability(n, out.k, nu);
    return out;
}

MeanSe meanAndStandardError(const std::vector<double>& values) {
    if (values.empty()) throw InvalidInput("no values to summarize");
    const double count = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= count;
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

BenchmarkReport runBenchmark(const BenchmarkOptions& options) {
    if (options.replications < 1) throw InvalidInput("replications must be at least 1");
    if (options.models.empty() || options.n_values.empty()) {
        throw InvalidInput("benchmark needs at least one model and one n");
    }
    for (long n : options.n_values) {
        if (n < 2) throw InvalidInput("benchmark n values must be at least 2");
    }

    BenchmarkReport report;
    report.experiment = options.experiment;
    report.replications = options.replications;
    report.master_seed = options.master_seed.value;

    const auto reps = static_cast<std::size_t>(options.replications);
    for (NetworkModel model : options.models) {
        for (long n : options.n_values) {
            BenchmarkCell cell;
            cell.experiment = options.experiment;
            cell.model = model;
            cell.n = n;
            cell.replications = options.replications;
            cell.seed = options.master_seed.value;

            std::vector<double> primary(reps);
            std::vector<double> secondary(reps);
            std::vector<int> converged(reps, 1);
            const auto start = Clock::now();
            parallelFor(options.replications, options.parallel, [&](long r) {
                const Seed seed = replicationSeed(options.master_seed, options.experiment, model, n, r);
                const auto idx = static_cast<std::size_t>(r);
                if (options.experiment == Experiment::EffectiveRank) {
                    const Matrix truth =
                        probabilityMatrix(NetworkModelSpec{model, n}, deriveSeed(seed, {1}));
                    const double ratio = nuclearFrobeniusRatio(truth);
                    primary[idx] = ratio * ratio;
                    secondary[idx] = ratio;
                } else {
                    const PipelineOutcome o = runPipeline(model, n, seed, options.solver);
                    primary[idx] = o.mse;
                    secondary[idx] = o.iterations;
                    converged[idx] = o.converged ? 1 : 0;
                }
            });
            cell.elapsed_seconds = secondsSince(start);

            const MeanSe main = meanAndStandardError(primary);
            cell.mean = main.mean;
            cell.standard_error = main.se;
            if (options.experiment == Experiment::EffectiveRank) {
                const MeanSe ratio = meanAndStandardError(secondary);
                cell.ratio_mean = ratio.mean;
                cell.ratio_standard_error = ratio.se;
            } else {
                cell.k = defaultTraitCount(n);
                cell.nonconverged = static_cast<long>(std::count(converged.begin(), converged.end(), 0));
                cell.mean_iterations = meanAndStandardError(secondary).mean;
            }
            report.cells.push_back(cell);
        }
    }
    return report;
}

std::string reportJsonLines(const BenchmarkReport& report) {
    std::string out;
    for (const BenchmarkCell& c : report.cells) {
        nlohmann::ordered_json j;
        j["experiment"] = experimentName(c.experiment);
        j["model"] = modelName(c.model);
        j["n"] = c.n;
        j["K"] = c.k ? nlohmann::ordered_json(*c.k) : nlohmann::ordered_json(nullptr);
        j["reps"] = c.replications;
        j["mean"] = c.mean;
        j["se"] = c.standard_error;
        j["seed"] = c.seed;
        j["elapsed_seconds"] = c.elapsed_seconds;
        if (c.ratio_mean) {
            j["nuc_frob_ratio_mean"] = *c.ratio_mean;
            j["nuc_frob_ratio_se"] = *c.ratio_standard_error;
        }
        if (c.nonconverged) {
            j["nonconverged"] = *c.nonconverged;
            j["mean_iterations"] = *c.mean_iterations;
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string renderTable(const BenchmarkReport& report) {
    std::vector<long> ns;
    std::vector<NetworkModel> models;
    for (const auto& c : report.cells) {
        if (std::find(ns.begin(), ns.end(), c.n) == ns.end()) ns.push_back(c.n);
        if (std::find(models.begin(), models.end(), c.model) == models.end()) models.push_back(c.model);
    }
    const bool er = report.experiment == Experiment::EffectiveRank;
    std::ostringstream os;
    os << (er ? "Effective rank" : "Mean squared error") << " (" << report.replications
       << " replications, seed " << report.master_seed << ")\n";
    char buf[64];
    os << "model";
    for (long n : ns) {
        std::snprintf(buf, sizeof buf, " %20s", ("n=" + std::to_string(n)).c_str());
        os << buf;
    }
    os << '\n';
    for (NetworkModel m : models) {
        os << modelName(m) << "  ";
        for (long n : ns) {
            const auto it = std::find_if(report.cells.begin(), report.cells.end(),
                                         [&](const BenchmarkCell& c) { return c.model == m && c.n == n; });
            if (it == report.cells.end()) {
                std::snprintf(buf, sizeof buf, " %20s", "-");
            } else if (er) {
                std::snprintf(buf, sizeof buf, " %9.3f (%7.4f)", it->mean, it->standard_error);
            } else {
                std::snprintf(buf, sizeof buf, " %9.5f (%7.5f)", it->mean, it->standard_error);
            }
            os << buf;
        }
        os << '\n';
    }
    if (er) {
        os << "nuclear/Frobenius ratio:\n";
        for (NetworkModel m : models) {
            os << modelName(m) << "  ";
            for (long n : ns) {
                const auto it = std::find_if(report.cells.begin(), report.cells.end(),
                                             [&](const BenchmarkCell& c) { return c.model == m && c.n == n; });
                if (it == report.cells.end() || !it->ratio_mean) continue;
                std::snprintf(buf, sizeof buf, " %9.3f (%7.4f)", *it->ratio_mean, *it->ratio_standard_error);
                os << buf;
            }
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace ardnet
