#pragma once

#include "ardnet/linalg.hpp"

#include <optional>
#include <vector>

namespace ardnet {

struct ErrorReport {
    double mse = 0.0;
    double relative_frobenius_error = 0.0;
    std::optional<double> theoretical_bound;
    std::optional<bool> bound_satisfied;
};

/// Mean of squared entrywise differences over all entries, diagonal included.
double mse(const Matrix& estimate, const Matrix& truth);

/// ||estimate - truth||_F / ||truth||_F.
double relativeFrobeniusError(const Matrix& estimate, const Matrix& truth);

/// min over columns j of (1/K) sum_k p_kj (1 - p_kj), for the design
/// probabilities p_kj = E[W_kj].
double nuConstant(const Matrix& trait_probabilities);

/// sqrt(2048 * lambda * ER(truth) / (nu * ||truth||_nuc * K)): high-probability
/// bound on the relative Frobenius error of the penalized estimate.
double theoreticalBound(const Matrix& truth, double lambda, double nu, long k);

/// Lower bound on the probability that theoreticalBound holds:
/// 1 - N2^2 exp(-K nu^2 / 8) - exp(-(sqrt(N2) + sqrt(K)) / 2). May be <= 0,
/// in which case the bound carries no guarantee.
double boundProbability(long n2, long k, double nu);

/// Errors plus the bound when `bound` inputs are supplied. bound_satisfied
/// is informational: the bound holds only with the probability above.
struct BoundInputs {
    double lambda;
    double nu;
    long k;
};
ErrorReport errorReport(const Matrix& estimate, const Matrix& truth,
                        std::optional<BoundInputs> bound = std::nullopt);

/// Leading square block (the surveyed agents) of an N2 x N1 matrix.
Matrix surveyedBlock(const Matrix& M);

/// Row sums of the surveyed block excluding the diagonal.
std::vector<double> expectedDegrees(const Matrix& M);

/// 3 * triangles / connected triples of an undirected simple graph; 0 when
/// there are no connected triples. Throws InvalidInput for non-square,
/// asymmetric, non-binary input or a nonzero diagonal.
double globalClustering(const Matrix& adjacency);

}  // namespace ardnet
