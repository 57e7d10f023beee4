#include "ardnet/errors.hpp"
#include "ardnet/netgen.hpp"
#include "ardnet/solver.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ardnet;

namespace {

struct Instance {
    Matrix truth;
    Matrix graph;
    Matrix traits;
    Problem problem;
};

// Simulated pipeline instance with N1 = N2 = n.
Instance simulated(NetworkModel model, long n, long k, std::uint64_t seed) {
    const Seed s{seed};
    Matrix truth = probabilityMatrix(NetworkModelSpec{model, n}, deriveSeed(s, {1}));
    Matrix graph = sampleAdjacency(truth, deriveSeed(s, {2}));
    Matrix traits = generateTraits(k, n, deriveSeed(s, {3}));
    Problem problem(generateArd(graph, traits), traits);
    return {std::move(truth), std::move(graph), std::move(traits), std::move(problem)};
}

// K = N2 binary trait matrix with W'W comfortably invertible.
Matrix wellConditionedTraits(long n, Rng& rng) {
    while (true) {
        Matrix W = oracle::randomBinary(n, n, rng);
        const Vector s = oracle::jacobiSingularValues(W);
        if (s(n - 1) > 0.01 * s(0)) return W;
    }
}

bool topBlockExact(const Matrix& M, Eigen::Index n1) {
    const Matrix block = M.topLeftCorner(n1, n1);
    return block == block.transpose() && (block.diagonal().array() == 0.0).all() &&
           (M.array() >= 0.0).all();
}

}  // namespace

TEST_CASE("problem validation") {
    const Matrix W = Matrix::Ones(2, 3);
    CHECK_NOTHROW(Problem(Matrix::Ones(2, 3), W));
    CHECK_THROWS_AS(Problem(Matrix::Ones(3, 3), W), InvalidInput);   // K mismatch
    CHECK_THROWS_AS(Problem(Matrix::Ones(2, 4), W), InvalidInput);   // N1 > N2
    CHECK_THROWS_AS(Problem(-Matrix::Ones(2, 3), W), InvalidInput);  // negative counts
    Matrix bad = W;
    bad(0, 0) = 0.5;
    CHECK_THROWS_AS(Problem(Matrix::Ones(2, 3), bad), InvalidInput);

    try {
        Problem(Matrix::Ones(3, 2), W);
        FAIL("expected a shape error");
    } catch (const InvalidInput& e) {
        const std::string msg = e.what();
        CHECK(msg.find("3x2") != std::string::npos);
        CHECK(msg.find("2x3") != std::string::npos);
    }
}

TEST_CASE("objective") {
    Rng rng(Seed{21});
    const Matrix G = oracle::randomGraph(4, rng, 0.5);
    const Matrix W = oracle::randomBinary(3, 4, rng);
    const Problem p(W * G, W);
    CHECK(objective(G, p, 0.0) == 0.0);
    CHECK(objective(Matrix::Zero(4, 4), p, 2.0) == doctest::Approx(0.5 * (W * G).squaredNorm()));

    // N2 = 3, N1 = 2, K = 4 against explicit loops.
    const Matrix W2 = oracle::randomBinary(4, 3, rng);
    const Matrix Y2 = (oracle::randomMatrix(4, 2, rng).array().abs() * 3.0).matrix();
    const Matrix M = oracle::randomMatrix(3, 2, rng);
    const Problem p2(Y2, W2);
    CHECK(std::abs(objective(M, p2, 0.8) - oracle::objectiveByLoops(M, Y2, W2, 0.8)) < 1e-10);

    CHECK_THROWS_AS(objective(Matrix::Zero(2, 3), p2, 0.8), InvalidInput);
}

TEST_CASE("default penalty") {
    // 2 * (10 + 10 + 1) * (10 + sqrt(10)), evaluated by hand.
    CHECK(defaultPenalty(100, 100, 10) == doctest::Approx(552.8156617).epsilon(1e-9));
    CHECK(defaultPenalty(1, 1, 1) == doctest::Approx(12.0));

    const long a = 37, b = 53, c = 6;
    const double expected = 2.0 * (2.0 * std::sqrt(a) + 2.0 * std::sqrt(b) + 1.0) *
                            (2.0 * std::sqrt(b) + 2.0 * std::sqrt(c));
    CHECK(defaultPenalty(4 * a, 4 * b, 4 * c) == doctest::Approx(expected).epsilon(1e-14));

    CHECK_THROWS_AS(defaultPenalty(0, 1, 1), InvalidInput);
    CHECK_THROWS_AS(defaultPenalty(1, 1, -2), InvalidInput);
}

TEST_CASE("symmetrize") {
    Matrix M(2, 2);
    M << 0.5, -0.2, 0.4, 0.3;
    Matrix expected(2, 2);
    expected << 0.0, 0.2, 0.2, 0.0;
    CHECK((symmetrize(M, 2) - expected).cwiseAbs().maxCoeff() < 1e-15);

    Matrix fixed(3, 3);
    fixed << 0, 0.1, 0.2, 0.1, 0, 0.3, 0.2, 0.3, 0;
    CHECK(symmetrize(fixed, 3) == fixed);

    CHECK(symmetrize(-Matrix::Ones(4, 3), 3).isZero(0.0));

    // Rows past N1 are only clamped.
    Matrix tall(3, 2);
    tall << 0.5, 0.1, 0.3, 0.7, -1.0, 0.9;
    const Matrix s = symmetrize(tall, 2);
    CHECK(s(2, 0) == 0.0);
    CHECK(s(2, 1) == 0.9);
    CHECK(s(0, 1) == doctest::Approx(0.2));

    CHECK_THROWS_AS(symmetrize(tall, 3), InvalidInput);
}

TEST_CASE("gradient step") {
    Rng rng(Seed{22});
    const Matrix G = oracle::randomGraph(5, rng, 0.4);
    const Matrix W = oracle::randomBinary(3, 5, rng);
    const Problem p(W * G, W);
    CHECK((gradientStep(G, p, 0.0, 2.0) - G).cwiseAbs().maxCoeff() < 1e-10);

    // Shrinkage beyond the largest singular value of the stepped point.
    const Matrix Z = oracle::randomMatrix(5, 5, rng);
    const double L = 3.0;
    const Matrix stepped = Z - (W.transpose() * W * Z - W.transpose() * (W * G)) / L;
    const double sigma = oracle::jacobiSingularValues(stepped)(0);
    CHECK(gradientStep(Z, p, L * sigma * 1.001, L).isZero(0.0));
    CHECK(gradientStep(Z, p, sigma * 1.001, L, ShrinkageRule::Literal).isZero(0.0));

    // N2 = 4, N1 = 3: plain step composed with the Jacobi prox.
    const Matrix W4 = oracle::randomBinary(2, 4, rng);
    const Matrix Y4 = oracle::randomBinary(2, 3, rng) * 2.0;
    const Problem p4(Y4, W4);
    const Matrix Z4 = oracle::randomMatrix(4, 3, rng);
    const double lambda = 0.9, L4 = 2.5;
    const Matrix plain = Z4 - (W4.transpose() * W4 * Z4 - W4.transpose() * Y4) / L4;
    CHECK((gradientStep(Z4, p4, lambda, L4) - oracle::jacobiProx(plain, lambda / L4)).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK((gradientStep(Z4, p4, lambda, L4, ShrinkageRule::Literal) - oracle::jacobiProx(plain, lambda))
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    CHECK_THROWS_AS(gradientStep(Z4, p4, lambda, 0.0), InvalidInput);
    CHECK_THROWS_AS(gradientStep(Z4, p4, lambda, -1.0), InvalidInput);
}

TEST_CASE("exact least squares") {
    Rng rng(Seed{23});
    const Matrix G = oracle::randomGraph(6, rng, 0.5);
    const Problem identity(G, Matrix::Identity(6, 6));
    CHECK((exactLeastSquares(identity) - G).cwiseAbs().maxCoeff() == 0.0);

    // K > N2, full column rank.
    Matrix W;
    do {
        W = oracle::randomBinary(15, 6, rng);
    } while (oracle::jacobiSingularValues(W)(5) < 0.1);
    const Problem tall(W * G, W);
    CHECK((exactLeastSquares(tall) - G).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((exactLeastSquares(tall) - oracle::normalEquationsSolve(W * G, W)).cwiseAbs().maxCoeff() < 1e-8);

    const Problem wide(oracle::randomBinary(4, 6, rng), oracle::randomBinary(4, 6, rng));
    CHECK_THROWS_AS(exactLeastSquares(wide), SingularSystem);

    Matrix repeated = oracle::randomBinary(8, 6, rng);
    repeated.col(5) = repeated.col(4);
    CHECK_THROWS_AS(exactLeastSquares(Problem(Matrix::Ones(8, 6), repeated)), SingularSystem);
}

TEST_CASE("fit recovers the exact solution when W'W is invertible") {
    Rng rng(Seed{24});
    const long n = 20;
    const Matrix G = oracle::randomGraph(n, rng, 0.3);
    const Matrix W = wellConditionedTraits(n, rng);
    const Problem p(W * G, W);

    SolverConfig config;
    config.lambda = 0.0;
    config.epsilon = 1e-10;
    config.max_iterations = 200000;
    const SolverResult r = fit(p, config);
    CHECK(r.converged);
    const Matrix exact = symmetrize(exactLeastSquares(p), n);
    CHECK((r.estimate - exact).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("a dominant penalty returns the zero matrix") {
    const Instance inst = simulated(NetworkModel::LatentSpace, 25, 5, 3);
    const Matrix WtY = inst.traits.transpose() * inst.problem.ard();
    SolverConfig config;
    config.lambda = spectralNorm(WtY);
    for (auto mode : {ConstraintMode::Unconstrained, ConstraintMode::UndirectedNoSelfLinks}) {
        config.constraint_mode = mode;
        const SolverResult r = fit(inst.problem, config);
        CHECK(r.estimate.isZero(0.0));
        CHECK(r.converged);
        CHECK(r.iterations_used == 1);
    }
}

TEST_CASE("literal shrinkage collapses the estimate at the recommended penalty") {
    const Instance inst = simulated(NetworkModel::RandomDotProduct, 40, 6, 4);
    SolverConfig config;
    config.lambda = defaultPenalty(40, 40, 6);
    config.shrinkage = ShrinkageRule::Literal;
    CHECK(fit(inst.problem, config).estimate.isZero(0.0));
    config.shrinkage = ShrinkageRule::StepScaled;
    CHECK_FALSE(fit(inst.problem, config).estimate.isZero(0.0));
}

TEST_CASE("constrained fits satisfy the constraints exactly") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto model = static_cast<NetworkModel>(seed % 3);
        const Instance inst = simulated(model, 30, 5, seed);
        SolverConfig config;
        config.lambda = defaultPenalty(30, 30, 5) * (seed % 2 ? 0.1 : 1.0);
        config.per_iteration_projection = seed % 3 == 0;
        const SolverResult r = fit(inst.problem, config);
        CHECK(topBlockExact(r.estimate, 30));
    }
}

TEST_CASE("constraints with N1 < N2 apply to the surveyed block") {
    Rng rng(Seed{25});
    const Matrix G = oracle::randomGraph(12, rng, 0.3);
    const Matrix W = oracle::randomBinary(4, 12, rng);
    const Matrix Y = W * G.leftCols(7);
    const Problem p(Y, W);
    SolverConfig config;
    config.lambda = defaultPenalty(7, 12, 4) * 0.05;
    const SolverResult r = fit(p, config);
    REQUIRE(r.estimate.rows() == 12);
    REQUIRE(r.estimate.cols() == 7);
    CHECK(topBlockExact(r.estimate, 7));
}

TEST_CASE("clamp at one caps the estimate") {
    const Instance inst = simulated(NetworkModel::StochasticBlock, 30, 5, 8);
    SolverConfig config;
    config.lambda = 1.0;
    config.clamp_upper_at_one = true;
    const SolverResult r = fit(inst.problem, config);
    CHECK(r.estimate.maxCoeff() <= 1.0);
    CHECK(topBlockExact(r.estimate, 30));
}

TEST_CASE("fit is deterministic") {
    const Instance inst = simulated(NetworkModel::LatentSpace, 30, 5, 9);
    SolverConfig config;
    config.lambda = defaultPenalty(30, 30, 5);
    const SolverResult a = fit(inst.problem, config);
    const SolverResult b = fit(inst.problem, config);
    CHECK(a.estimate == b.estimate);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("stopping contract and iteration cap") {
    const Instance inst = simulated(NetworkModel::LatentSpace, 30, 5, 10);
    SolverConfig config;
    config.lambda = defaultPenalty(30, 30, 5);
    const SolverResult r = fit(inst.problem, config);
    CHECK(r.converged);
    CHECK(r.final_change <= config.epsilon);
    CHECK(r.objective_trace.size() == static_cast<std::size_t>(r.iterations_used));

    config.max_iterations = 2;
    config.epsilon = 1e-14;
    const SolverResult capped = fit(inst.problem, config);
    CHECK_FALSE(capped.converged);
    CHECK(capped.iterations_used == 2);
    CHECK(capped.final_change > config.epsilon);
}

TEST_CASE("unconstrained endpoint objective never exceeds the start") {
    Rng rng(Seed{26});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = simulated(NetworkModel::RandomDotProduct, 20, 4, 100 + seed);
        SolverConfig config;
        config.constraint_mode = ConstraintMode::Unconstrained;
        config.lambda = defaultPenalty(20, 20, 4) * 0.3;
        const Matrix M0 = oracle::randomMatrix(20, 20, rng, 0.3);
        for (const Matrix& start : {Matrix(Matrix::Zero(20, 20)), M0}) {
            config.initial_guess = start;
            const SolverResult r = fit(inst.problem, config);
            CHECK(r.final_objective <= objective(start, inst.problem, config.lambda) + 1e-8);
        }
    }
}

TEST_CASE("accelerated fit agrees with plain proximal gradient") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const long n = 15 + 5 * static_cast<long>(seed % 3);
        const long k = 3 + static_cast<long>(seed);
        const Instance inst = simulated(static_cast<NetworkModel>(seed % 3), n, k, 200 + seed);
        SolverConfig config;
        config.constraint_mode = ConstraintMode::Unconstrained;
        config.lambda = defaultPenalty(n, n, k);
        config.epsilon = 1e-9;
        config.max_iterations = 100000;
        const SolverResult r = fit(inst.problem, config);
        const Matrix reference =
            oracle::plainProximalGradient(inst.problem.ard(), inst.traits, config.lambda, 1e-11, 400000);
        const double ref = oracle::objectiveByLoops(reference, inst.problem.ard(), inst.traits, config.lambda);
        CHECK(std::abs(r.final_objective - ref) <= 1e-3 * std::abs(ref));
    }
}

TEST_CASE("invalid configurations") {
    const Instance inst = simulated(NetworkModel::LatentSpace, 10, 3, 11);
    SolverConfig config;
    config.epsilon = 0.0;
    CHECK_THROWS_AS(fit(inst.problem, config), InvalidInput);
    config.epsilon = 1e-4;
    config.max_iterations = 0;
    CHECK_THROWS_AS(fit(inst.problem, config), InvalidInput);
    config.max_iterations = 10;
    config.lambda = -1.0;
    CHECK_THROWS_AS(fit(inst.problem, config), InvalidInput);
    config.lambda = 1.0;
    config.initial_guess = Matrix::Zero(9, 10);
    CHECK_THROWS_AS(fit(inst.problem, config), InvalidInput);

    const Problem zero_traits(Matrix::Zero(3, 10), Matrix::Zero(3, 10));
    CHECK_THROWS_AS(fit(zero_traits, SolverConfig{}), InvalidInput);
}

TEST_CASE("fit matches an accelerated loop over dense gradient steps") {
    // n large relative to rank + K, so fit takes its reduced-subspace prox.
    const long n = 80, k = 9;
    const Instance inst = simulated(NetworkModel::LatentSpace, n, k, 77);
    const double lambda = defaultPenalty(n, n, k);
    const Matrix& W = inst.traits;
    const double L = spectralNorm(W.transpose() * W);

    Matrix previous = Matrix::Zero(n, n), lookahead = previous;
    double alpha = 1.0;
    int iterations = 0;
    for (double change = INFINITY; change > 1e-6 && iterations < 5000; ++iterations) {
        const Matrix current = gradientStep(lookahead, inst.problem, lambda, L);
        const double alpha_prev = alpha;
        alpha = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha_prev * alpha_prev));
        lookahead = current + ((alpha_prev - 1.0) / alpha) * (current - previous);
        change = (previous - current).norm();
        previous = current;
    }

    SolverConfig config;
    config.lambda = lambda;
    config.epsilon = 1e-6;
    config.constraint_mode = ConstraintMode::Unconstrained;
    const SolverResult r = fit(inst.problem, config);
    CHECK(r.iterations_used == iterations);
    CHECK((r.estimate - previous).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(2 * (2 * numericalRank(r.estimate) + k) <= n);
}
