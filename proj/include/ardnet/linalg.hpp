#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace ardnet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thin SVD, A = U * diag(singular_values) * Vt, with singular values
/// nonincreasing. No sign canonicalization of U or Vt.
struct SvdFactors {
    Matrix U;
    Vector singular_values;
    Matrix Vt;

    Matrix reconstruct() const;
};

/// Throws InvalidInput if A is empty or holds NaN/inf. `what` names the
/// argument in the message.
void requireFinite(const Matrix& A, std::string_view what = "matrix");

SvdFactors svd(const Matrix& A);

/// Singular values only; cheaper than svd() when the factors are not needed.
Vector singularValues(const Matrix& A);

double nuclearNorm(const Matrix& A);
double frobeniusNorm(const Matrix& A);
double spectralNorm(const Matrix& A);

/// (||A||_nuc / ||A||_F)^2. Lies in [1, rank(A)]. Throws UndefinedRatio for
/// the zero matrix.
double effectiveRank(const Matrix& A);

/// ||A||_nuc / ||A||_F, the square root of effectiveRank().
double nuclearFrobeniusRatio(const Matrix& A);

/// Count of singular values above tolerance * sigma_max (0 for the zero matrix).
Eigen::Index numericalRank(const Matrix& A, double relative_tolerance = 1e-10);

/// Proximal operator of tau * ||.||_nuc: U diag(max(sigma - tau, 0)) Vt.
Matrix softThresholdSingularValues(const Matrix& C, double tau);

/// Same as softThresholdSingularValues, also reporting the nuclear norm of
/// the result (the sum of the shrunk singular values).
Matrix softThresholdSingularValues(const Matrix& C, double tau, double& shrunk_nuclear_norm);

}  // namespace ardnet
