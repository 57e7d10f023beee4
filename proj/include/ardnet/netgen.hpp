#pragma once

#include "ardnet/linalg.hpp"
#include "ardnet/random.hpp"

#include <span>
#include <string>
#include <string_view>

namespace ardnet {

enum class NetworkModel {
    LatentSpace,        // LSM
    RandomDotProduct,   // RDP
    StochasticBlock,    // SBM
};

std::string_view modelName(NetworkModel model) noexcept;  // "LSM", "RDP", "SBM"
/// Accepts lsm/rdp/sbm in any case; throws InvalidInput otherwise.
NetworkModel parseModel(std::string_view name);

struct NetworkModelSpec {
    NetworkModel model = NetworkModel::LatentSpace;
    long n = 0;
    // SBM only.
    int blocks = 5;
    double theta_within = 0.7;
    double theta_between = 0.3;

    void validate() const;
};

/// Draws agent effects from `seed` and returns the n x n link probability
/// matrix: symmetric, zero diagonal, entries in [0,1].
///
/// Draw order is part of the reproducibility contract:
///  - LSM: nu_1..nu_n ~ N(0,1), then (x_i, y_i) ~ U[0,1]^2 for i = 1..n;
///    m_ij = logistic(nu_i + nu_j - |z_i - z_j|).
///  - RDP: U_1..U_n ~ U[0,1]; m_ij = sqrt(U_i U_j).
///  - SBM: no draws; agent i (0-based) has type floor(i * L / n).
Matrix probabilityMatrix(const NetworkModelSpec& spec, Seed seed);

/// Deterministic builders behind probabilityMatrix, exposed for callers that
/// supply their own agent effects. `positions` is n x 2 (one row per agent).
Matrix latentSpaceProbabilities(std::span<const double> effects, const Matrix& positions);
Matrix dotProductProbabilities(std::span<const double> uniforms);
Matrix blockProbabilities(long n, int blocks, double theta_within, double theta_between);

/// Block index of agent i (0-based) when n agents split into `blocks` groups.
int blockOf(long i, long n, int blocks) noexcept;

/// Independent Bernoulli(m_ij) on the strict upper triangle (row-major
/// order), mirrored; zero diagonal. M must be square with entries in [0,1].
Matrix sampleAdjacency(const Matrix& M, Seed seed);

/// K x N2 matrix of iid Bernoulli(0.5) indicators, row-major draw order.
Matrix generateTraits(long k, long n2, Seed seed);

/// Y = W G; W is K x N2 and G is N2 x N1.
Matrix generateArd(const Matrix& adjacency, const Matrix& traits);

/// round(sqrt(n)), halves rounded up.
long defaultTraitCount(long n);

}  // namespace ardnet
