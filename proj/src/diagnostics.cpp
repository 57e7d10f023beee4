#include "ardnet/diagnostics.hpp"

#include "ardnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ardnet {

namespace {

void requireSameShape(const Matrix& a, const Matrix& b) {
    requireFinite(a, "estimate");
    requireFinite(b, "truth");
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("matrices differ in shape: " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()));
    }
}

}  // namespace

double mse(const Matrix& estimate, const Matrix& truth) {
    requireSameShape(estimate, truth);
    return (estimate - truth).squaredNorm() / static_cast<double>(truth.size());
}

double relativeFrobeniusError(const Matrix& estimate, const Matrix& truth) {
    requireSameShape(estimate, truth);
    const double denom = truth.norm();
    if (denom == 0.0) throw InvalidInput("relative error against a zero truth matrix");
    return (estimate - truth).norm() / denom;
}

double nuConstant(const Matrix& trait_probabilities) {
    requireFinite(trait_probabilities, "trait probabilities");
    const auto& p = trait_probabilities.array();
    if ((p < 0.0).any() || (p > 1.0).any()) {
        throw InvalidInput("trait probabilities must lie in [0,1]");
    }
    const Eigen::ArrayXXd variance = p * (1.0 - p);
    return variance.colwise().mean().minCoeff();
}

double theoreticalBound(const Matrix& truth, double lambda, double nu, long k) {
    if (!(nu > 0.0)) throw InvalidInput("nu must be positive");
    if (k < 1) throw InvalidInput("K must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be nonnegative");
    const Vector s = singularValues(truth);
    const double nuc = s.sum();
    if (nuc == 0.0) throw InvalidInput("bound is undefined for a zero truth matrix");
    const double er = (nuc * nuc) / s.squaredNorm();
    return std::sqrt(2048.0 * lambda * er / (nu * nuc * static_cast<double>(k)));
}

double boundProbability(long n2, long k, double nu) {
    const double dn2 = static_cast<double>(n2);
    const double dk = static_cast<double>(k);
    return 1.0 - dn2 * dn2 * std::exp(-dk * nu * nu / 8.0) -
           std::exp(-(std::sqrt(dn2) + std::sqrt(dk)) / 2.0);
}

ErrorReport errorReport(const Matrix& estimate, const Matrix& truth,
                        std::optional<BoundInputs> bound) {
    ErrorReport report;
    report.mse = mse(estimate, truth);
    report.relative_frobenius_error = relativeFrobeniusError(estimate, truth);
    if (bound) {
        report.theoretical_bound = theoreticalBound(truth, bound->lambda, bound->nu, bound->k);
        report.bound_satisfied = report.relative_frobenius_error <= *report.theoretical_bound;
    }
    return report;
}

Matrix surveyedBlock(const Matrix& M) {
    requireFinite(M, "probability matrix");
    const Eigen::Index n = std::min(M.rows(), M.cols());
    return M.topLeftCorner(n, n);
}

std::vector<double> expectedDegrees(const Matrix& M) {
    const Matrix block = surveyedBlock(M);
    std::vector<double> out(static_cast<std::size_t>(block.rows()));
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
        out[static_cast<std::size_t>(i)] = block.row(i).sum() - block(i, i);
    }
    return out;
}

double globalClustering(const Matrix& adjacency) {
    requireFinite(adjacency, "adjacency matrix");
    if (adjacency.rows() != adjacency.cols()) throw InvalidInput("adjacency matrix must be square");
    const auto& a = adjacency.array();
    if (((a != 0.0) && (a != 1.0)).any()) throw InvalidInput("adjacency entries must be 0 or 1");
    if (adjacency != adjacency.transpose()) throw InvalidInput("adjacency matrix must be symmetric");
    if ((adjacency.diagonal().array() != 0.0).any()) {
        throw InvalidInput("adjacency matrix must have a zero diagonal");
    }
    // trace(A^3) = 6 * triangles; connected triples = sum_i d_i (d_i - 1) / 2.
    const Matrix a2 = adjacency * adjacency;
    const double closed = (a2.array() * adjacency.array()).sum();  // 6 * triangles
    const Vector degree = adjacency.rowwise().sum();
    const double triples = (degree.array() * (degree.array() - 1.0)).sum() / 2.0;
    if (triples == 0.0) return 0.0;
    return (closed / 2.0) / triples;
}

}  // namespace ardnet
