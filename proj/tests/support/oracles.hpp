#pragma once

// Reference computations for tests. Each one takes a different route from
// the library code it checks: one-sided Jacobi SVD instead of divide and conquer, explicit
// loops instead of matrix products, enumeration instead of algebra.

#include "ardnet/linalg.hpp"
#include "ardnet/random.hpp"
#include "ardnet/solver.hpp"

namespace ardnet::oracle {

Matrix randomMatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0);
Matrix randomBinary(Eigen::Index rows, Eigen::Index cols, Rng& rng, double p = 0.5);
/// Symmetric 0/1 matrix with zero diagonal.
Matrix randomGraph(Eigen::Index n, Rng& rng, double p);

/// Singular values via Eigen::JacobiSVD.
Vector jacobiSingularValues(const Matrix& A);
double jacobiNuclearNorm(const Matrix& A);

/// 1/2 ||X - C||_F^2 + tau ||X||_nuc.
double proxObjective(const Matrix& X, const Matrix& C, double tau);

/// Smallest margin f(X + d) - f(X) over `trials` random perturbations d with
/// ||d||_F = radius. Positive means X beat every perturbation.
double worstPerturbationMargin(const Matrix& X, const Matrix& C, double tau, int trials,
                               double radius, Rng& rng);

/// Objective 1/2 sum_i sum_k (y_ki - sum_j m_ji w_kj)^2 + lambda * nuc, with
/// explicit loops and a Jacobi SVD.
double objectiveByLoops(const Matrix& M, const Matrix& Y, const Matrix& W, double lambda);

/// Unaccelerated proximal gradient (ISTA), unconstrained, from zero, until
/// ||M_t - M_{t-1}||_F <= tol or max_iterations. Uses a Jacobi-SVD prox.
Matrix plainProximalGradient(const Matrix& Y, const Matrix& W, double lambda, double tol,
                             int max_iterations);

/// Prox of tau * nuclear norm through a Jacobi SVD.
Matrix jacobiProx(const Matrix& C, double tau);

/// (W'W)^{-1} W'Y through the normal equations (LDLT).
Matrix normalEquationsSolve(const Matrix& Y, const Matrix& W);

/// 3 * triangles / connected triples by explicit enumeration of node
/// triples and paths of length two.
double clusteringByEnumeration(const Matrix& G);

}  // namespace ardnet::oracle
