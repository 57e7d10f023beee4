#pragma once

#include "ardnet/linalg.hpp"

#include <optional>
#include <vector>

namespace ardnet {

/// ARD counts Y (K x N1) and trait indicators W (K x N2). Surveyed agents
/// must occupy the first N1 population indices, so that rows 0..N1-1 of an
/// N2 x N1 estimate form the surveyed-surveyed block.
class Problem {
public:
    /// Validates shapes (K >= 1, 1 <= N1 <= N2), W entries in {0,1}, Y >= 0.
    Problem(Matrix ard, Matrix traits);

    const Matrix& ard() const noexcept { return ard_; }
    const Matrix& traits() const noexcept { return traits_; }

    Eigen::Index surveyed() const noexcept { return ard_.cols(); }       // N1
    Eigen::Index population() const noexcept { return traits_.cols(); }  // N2
    Eigen::Index traitCount() const noexcept { return traits_.rows(); }  // K

private:
    Matrix ard_;
    Matrix traits_;
};

enum class ConstraintMode {
    Unconstrained,
    UndirectedNoSelfLinks,
};

enum class ShrinkageRule {
    /// Shrink singular values by lambda / L: the exact proximal step.
    StepScaled,
    /// Shrink by lambda itself, ignoring the step size.
    Literal,
};

struct SolverConfig {
    double lambda = 0.0;
    double epsilon = 1e-4;
    int max_iterations = 5000;
    std::optional<Matrix> initial_guess;  // zero matrix when absent
    ConstraintMode constraint_mode = ConstraintMode::UndirectedNoSelfLinks;
    bool per_iteration_projection = false;
    bool clamp_upper_at_one = false;
    ShrinkageRule shrinkage = ShrinkageRule::StepScaled;
};

struct SolverResult {
    Matrix estimate;
    int iterations_used = 0;
    double final_change = 0.0;
    /// Objective of each accelerated iterate M_t, before the final projection.
    std::vector<double> objective_trace;
    /// Objective of the returned estimate.
    double final_objective = 0.0;
    double step_constant = 0.0;  // L = ||W'W||_2
    bool converged = false;
};

/// 1/2 ||Y - W M||_F^2 + lambda ||M||_nuc.
double objective(const Matrix& M, const Problem& problem, double lambda);

/// 2 (sqrt(N1) + sqrt(N2) + 1)(sqrt(N2) + sqrt(K)).
double defaultPenalty(long n1, long n2, long k);

/// Clamps negatives to zero, then replaces the leading N1 x N1 block by its
/// symmetric part with a zero diagonal. Rows past N1 are only clamped.
Matrix symmetrize(const Matrix& M, Eigen::Index n1);

/// One proximal gradient step from Z with step 1/L:
/// prox(Z - (W'W Z - W'Y) / L) where the shrinkage is lambda/L (StepScaled)
/// or lambda (Literal).
Matrix gradientStep(const Matrix& Z, const Problem& problem, double lambda, double L,
                    ShrinkageRule rule = ShrinkageRule::StepScaled);

/// Accelerated proximal gradient for the nuclear-norm penalized least
/// squares estimate. Deterministic; safe to call concurrently.
SolverResult fit(const Problem& problem, const SolverConfig& config);

/// (W'W)^{-1} W'Y, computed by a rank-revealing QR of W. Throws
/// SingularSystem when W does not have full column rank.
Matrix exactLeastSquares(const Problem& problem);

}  // namespace ardnet
