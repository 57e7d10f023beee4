#include "ardnet/benchmark.hpp"
#include "ardnet/csv.hpp"
#include "ardnet/diagnostics.hpp"
#include "ardnet/errors.hpp"
#include "ardnet/linalg.hpp"
#include "ardnet/netgen.hpp"
#include "ardnet/solver.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace ardnet;

namespace {

SolverConfig makeConfig(double lambda, double epsilon, int max_iterations,
                        std::optional<Matrix> initial_guess, bool directed,
                        bool per_iteration_projection, bool clamp_upper_at_one,
                        bool literal_shrinkage) {
    SolverConfig c;
    c.lambda = lambda;
    c.epsilon = epsilon;
    c.max_iterations = max_iterations;
    c.initial_guess = std::move(initial_guess);
    c.constraint_mode = directed ? ConstraintMode::Unconstrained : ConstraintMode::UndirectedNoSelfLinks;
    c.per_iteration_projection = per_iteration_projection;
    c.clamp_upper_at_one = clamp_upper_at_one;
    c.shrinkage = literal_shrinkage ? ShrinkageRule::Literal : ShrinkageRule::StepScaled;
    return c;
}

py::object jsonToPython(const nlohmann::json& j) {
    if (j.is_null()) return py::none();
    if (j.is_boolean()) return py::bool_(j.get<bool>());
    if (j.is_number_unsigned()) return py::int_(j.get<std::uint64_t>());
    if (j.is_number_integer()) return py::int_(j.get<std::int64_t>());
    if (j.is_number_float()) return py::float_(j.get<double>());
    if (j.is_string()) return py::str(j.get<std::string>());
    py::dict d;
    for (auto it = j.begin(); it != j.end(); ++it) d[py::str(it.key())] = jsonToPython(it.value());
    return std::move(d);
}

}  // namespace

PYBIND11_MODULE(_ardnet, m) {
    m.doc() = "Nuclear-norm penalized recovery of link probabilities from ARD";

    static py::exception<SingularSystem> singular(m, "SingularSystemError", PyExc_RuntimeError);
    static py::exception<ParseError> parse(m, "CsvParseError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const SingularSystem& e) {
            py::set_error(singular, e.what());
        } catch (const ParseError& e) {
            py::set_error(parse, e.what());
        } catch (const IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        }
    });

    // linalg
    m.def("svd", [](const Matrix& a) {
        SvdFactors f = svd(a);
        return py::make_tuple(f.U, f.singular_values, f.Vt);
    }, py::arg("a"), "Thin SVD; returns (U, singular_values, Vt).");
    m.def("nuclear_norm", &nuclearNorm, py::arg("a"));
    m.def("frobenius_norm", &frobeniusNorm, py::arg("a"));
    m.def("spectral_norm", &spectralNorm, py::arg("a"));
    m.def("effective_rank", &effectiveRank, py::arg("a"));
    m.def("soft_threshold_singular_values",
          py::overload_cast<const Matrix&, double>(&softThresholdSingularValues), py::arg("c"),
          py::arg("tau"));

    // solver
    py::class_<SolverResult>(m, "SolverResult")
        .def_readonly("estimate", &SolverResult::estimate)
        .def_readonly("iterations_used", &SolverResult::iterations_used)
        .def_readonly("final_change", &SolverResult::final_change)
        .def_readonly("objective_trace", &SolverResult::objective_trace)
        .def_readonly("final_objective", &SolverResult::final_objective)
        .def_readonly("step_constant", &SolverResult::step_constant)
        .def_readonly("converged", &SolverResult::converged);

    m.def("objective", [](const Matrix& M, const Matrix& Y, const Matrix& W, double lambda) {
        return objective(M, Problem(Y, W), lambda);
    }, py::arg("m"), py::arg("y"), py::arg("w"), py::arg("lam"));
    m.def("default_penalty", &defaultPenalty, py::arg("n1"), py::arg("n2"), py::arg("k"));
    m.def("symmetrize", &symmetrize, py::arg("m"), py::arg("n1"));
    m.def("gradient_step", [](const Matrix& Z, const Matrix& Y, const Matrix& W, double lambda,
                              double L, bool literal) {
        return gradientStep(Z, Problem(Y, W), lambda, L,
                            literal ? ShrinkageRule::Literal : ShrinkageRule::StepScaled);
    }, py::arg("z"), py::arg("y"), py::arg("w"), py::arg("lam"), py::arg("step_constant"),
       py::arg("literal_shrinkage") = false);
    m.def("exact_least_squares", [](const Matrix& Y, const Matrix& W) {
        return exactLeastSquares(Problem(Y, W));
    }, py::arg("y"), py::arg("w"));
    m.def("fit", [](const Matrix& Y, const Matrix& W, std::optional<double> lambda, double epsilon,
                    int max_iterations, std::optional<Matrix> initial_guess, bool directed,
                    bool per_iteration_projection, bool clamp_upper_at_one, bool literal_shrinkage) {
        const Problem problem(Y, W);
        const double lam = lambda.value_or(
            defaultPenalty(problem.surveyed(), problem.population(), problem.traitCount()));
        const SolverConfig config =
            makeConfig(lam, epsilon, max_iterations, std::move(initial_guess), directed,
                       per_iteration_projection, clamp_upper_at_one, literal_shrinkage);
        py::gil_scoped_release release;
        return fit(problem, config);
    }, py::arg("y"), py::arg("w"), py::arg("lam") = py::none(), py::arg("epsilon") = 1e-4,
       py::arg("max_iterations") = 5000, py::arg("initial_guess") = py::none(),
       py::arg("directed") = false, py::arg("per_iteration_projection") = false,
       py::arg("clamp_upper_at_one") = false, py::arg("literal_shrinkage") = false,
       "Penalized estimate of the N2 x N1 link probability matrix. lam defaults to the\n"
       "recommended penalty for the data's dimensions.");

    // netgen
    m.def("probability_matrix", [](const std::string& model, long n, std::uint64_t seed, int blocks,
                                   double theta_within, double theta_between) {
        return probabilityMatrix(NetworkModelSpec{parseModel(model), n, blocks, theta_within, theta_between},
                                 Seed{seed});
    }, py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("blocks") = 5,
       py::arg("theta_within") = 0.7, py::arg("theta_between") = 0.3);
    m.def("sample_adjacency", [](const Matrix& M, std::uint64_t seed) {
        return sampleAdjacency(M, Seed{seed});
    }, py::arg("m"), py::arg("seed"));
    m.def("generate_traits", [](long k, long n2, std::uint64_t seed) {
        return generateTraits(k, n2, Seed{seed});
    }, py::arg("k"), py::arg("n2"), py::arg("seed"));
    m.def("generate_ard", &generateArd, py::arg("adjacency"), py::arg("traits"));
    m.def("default_trait_count", &defaultTraitCount, py::arg("n"));

    // diagnostics
    m.def("mse", &mse, py::arg("estimate"), py::arg("truth"));
    m.def("relative_frobenius_error", &relativeFrobeniusError, py::arg("estimate"), py::arg("truth"));
    m.def("nu_constant", &nuConstant, py::arg("trait_probabilities"));
    m.def("theoretical_bound", &theoreticalBound, py::arg("truth"), py::arg("lam"), py::arg("nu"),
          py::arg("k"));
    m.def("expected_degrees", &expectedDegrees, py::arg("m"));
    m.def("global_clustering", &globalClustering, py::arg("adjacency"));

    // io
    m.def("read_matrix_csv", [](const std::string& path) { return readMatrixCsv(path); },
          py::arg("path"));
    m.def("write_matrix_csv", [](const Matrix& M, const std::string& path) { writeMatrixCsv(M, path); },
          py::arg("m"), py::arg("path"));

    m.def("benchmark", [](const std::string& experiment, std::vector<std::string> models,
                          std::vector<long> n_values, long reps, std::uint64_t seed, int parallel) {
        BenchmarkOptions options;
        options.experiment = parseExperiment(experiment);
        for (const auto& name : models) options.models.push_back(parseModel(name));
        options.n_values = std::move(n_values);
        options.replications = reps;
        options.master_seed = Seed{seed};
        options.parallel = parallel;
        BenchmarkReport report;
        {
            py::gil_scoped_release release;
            report = runBenchmark(options);
        }
        py::list cells;
        const std::string lines = reportJsonLines(report);
        std::size_t start = 0;
        while (start < lines.size()) {
            const std::size_t end = lines.find('\n', start);
            cells.append(jsonToPython(nlohmann::json::parse(lines.substr(start, end - start))));
            start = end + 1;
        }
        return cells;
    }, py::arg("experiment"), py::arg("models"), py::arg("n_values"), py::arg("reps") = 500,
       py::arg("seed") = 0, py::arg("parallel") = 1,
       "Monte Carlo study; returns one dict per (model, n) cell.");
}
