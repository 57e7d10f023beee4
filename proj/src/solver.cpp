#include "ardnet/solver.hpp"

#include "ardnet/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>

namespace ardnet {

namespace {

std::string shape(const Matrix& A) {
    std::ostringstream os;
    os << A.rows() << "x" << A.cols();
    return os.str();
}

void requireShape(const Matrix& M, Eigen::Index rows, Eigen::Index cols, std::string_view what) {
    if (M.rows() != rows || M.cols() != cols) {
        std::ostringstream os;
        os << what << " must be " << rows << "x" << cols << ", got " << shape(M);
        throw InvalidInput(os.str());
    }
}

double shrinkageAmount(double lambda, double L, ShrinkageRule rule) {
    return rule == ShrinkageRule::StepScaled ? lambda / L : lambda;
}

void validateLambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidInput("lambda must be a finite nonnegative number");
    }
}

double residualSquaredNorm(const Matrix& M, const Problem& p) {
    return (p.ard() - p.traits() * M).squaredNorm();
}

// Orthonormal basis whose span contains the columns of A (rows >= cols).
Matrix containingBasis(const Matrix& A) {
    const Eigen::HouseholderQR<Matrix> qr(A);
    return qr.householderQ() * Matrix::Identity(A.rows(), A.cols());
}

// Keeps singular triplets above tau, shrunk by tau.
SvdFactors shrink(const SvdFactors& f, double tau) {
    Eigen::Index keep = 0;
    while (keep < f.singular_values.size() && f.singular_values(keep) > tau) ++keep;
    SvdFactors out;
    out.U = f.U.leftCols(keep);
    out.singular_values = f.singular_values.head(keep).array() - tau;
    out.Vt = f.Vt.topRows(keep);
    return out;
}

// Prox of tau * nuclear norm at C = Z - (W'W Z - W'Y) / L, where Z mixes two
// iterates with known factors a and b. The columns of C lie in
// span(U_a, U_b, W') and its rows in span(V_a, V_b, Y'), so C factors
// exactly through a small core matrix. Falls back to a dense SVD when
// either iterate is unfactored or the subspaces are not small.
SvdFactors proxStep(const Matrix& C, double tau, const SvdFactors* a, const SvdFactors* b,
                    const Matrix& Wt, const Matrix& Yt) {
    if (a != nullptr && b != nullptr) {
        const Eigen::Index r = a->singular_values.size() + b->singular_values.size() + Wt.cols();
        if (2 * r <= std::min(C.rows(), C.cols())) {
            Matrix cols(C.rows(), r), rows(C.cols(), r);
            cols << a->U, b->U, Wt;
            rows << a->Vt.transpose(), b->Vt.transpose(), Yt;
            const Matrix QL = containingBasis(cols);
            const Matrix QR = containingBasis(rows);
            SvdFactors core = svd(QL.transpose() * C * QR);
            core.U = QL * core.U;
            core.Vt = core.Vt * QR.transpose();
            return shrink(core, tau);
        }
    }
    return shrink(svd(C), tau);
}

}  // namespace

Problem::Problem(Matrix ard, Matrix traits) : ard_(std::move(ard)), traits_(std::move(traits)) {
    requireFinite(ard_, "ARD matrix");
    requireFinite(traits_, "trait matrix");
    if (ard_.rows() != traits_.rows()) {
        throw InvalidInput("ARD matrix is " + shape(ard_) + " but trait matrix is " +
                           shape(traits_) + "; both need K rows");
    }
    if (ard_.cols() > traits_.cols()) {
        throw InvalidInput("ARD matrix is " + shape(ard_) + " but trait matrix is " +
                           shape(traits_) + "; surveyed agents N1 cannot exceed population N2");
    }
    if (((traits_.array() != 0.0) && (traits_.array() != 1.0)).any()) {
        throw InvalidInput("trait matrix entries must be 0 or 1");
    }
    if ((ard_.array() < 0.0).any()) {
        throw InvalidInput("ARD counts must be nonnegative");
    }
}

double objective(const Matrix& M, const Problem& problem, double lambda) {
    requireShape(M, problem.population(), problem.surveyed(), "estimate");
    validateLambda(lambda);
    double nuc = 0.0;
    if (lambda != 0.0) nuc = nuclearNorm(M);
    else requireFinite(M, "estimate");
    return 0.5 * residualSquaredNorm(M, problem) + lambda * nuc;
}

double defaultPenalty(long n1, long n2, long k) {
    if (n1 <= 0 || n2 <= 0 || k <= 0) {
        throw InvalidInput("defaultPenalty needs positive N1, N2 and K");
    }
    const double r1 = std::sqrt(static_cast<double>(n1));
    const double r2 = std::sqrt(static_cast<double>(n2));
    const double rk = std::sqrt(static_cast<double>(k));
    return 2.0 * (r1 + r2 + 1.0) * (r2 + rk);
}

Matrix symmetrize(const Matrix& M, Eigen::Index n1) {
    if (n1 < 0 || n1 > M.rows() || n1 > M.cols()) {
        throw InvalidInput("symmetrize: block size " + std::to_string(n1) +
                           " does not fit a " + shape(M) + " matrix");
    }
    Matrix out = M.cwiseMax(0.0);
    for (Eigen::Index i = 0; i < n1; ++i) {
        out(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n1; ++j) {
            const double avg = 0.5 * (out(i, j) + out(j, i));
            out(i, j) = avg;
            out(j, i) = avg;
        }
    }
    return out;
}

Matrix gradientStep(const Matrix& Z, const Problem& problem, double lambda, double L,
                    ShrinkageRule rule) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw InvalidInput("step constant L must be positive");
    }
    validateLambda(lambda);
    requireShape(Z, problem.population(), problem.surveyed(), "lookahead point");
    const Matrix& W = problem.traits();
    const Matrix gradient = W.transpose() * (W * Z) - W.transpose() * problem.ard();
    return softThresholdSingularValues(Z - gradient / L, shrinkageAmount(lambda, L, rule));
}

SolverResult fit(const Problem& problem, const SolverConfig& config) {
    validateLambda(config.lambda);
    if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
        throw InvalidInput("epsilon must be positive");
    }
    if (config.max_iterations < 1) {
        throw InvalidInput("max_iterations must be at least 1");
    }

    const Matrix& W = problem.traits();
    const Matrix& Y = problem.ard();
    const Eigen::Index n1 = problem.surveyed();
    const Eigen::Index n2 = problem.population();
    const bool undirected = config.constraint_mode == ConstraintMode::UndirectedNoSelfLinks;

    Matrix previous = Matrix::Zero(n2, n1);
    if (config.initial_guess) {
        requireShape(*config.initial_guess, n2, n1, "initial guess");
        requireFinite(*config.initial_guess, "initial guess");
        previous = *config.initial_guess;
    }

    const Matrix gram = W.transpose() * W;
    const double L = spectralNorm(gram);
    if (!(L > 0.0)) {
        throw InvalidInput("trait matrix is all zeros; the loss carries no information");
    }
    const Matrix WtY = W.transpose() * Y;
    const double tau = shrinkageAmount(config.lambda, L, config.shrinkage);

    auto project = [&](Matrix M) {
        if (undirected) M = symmetrize(M, n1);
        if (config.clamp_upper_at_one) M = M.cwiseMin(1.0);
        return M;
    };

    SolverResult result;
    result.step_constant = L;

    // Zero is optimal exactly when W'Y lies in lambda times the unit
    // spectral-norm ball, the nuclear norm's subdifferential at zero.
    if (config.shrinkage == ShrinkageRule::StepScaled && config.lambda > 0.0 &&
        config.lambda >= spectralNorm(WtY)) {
        result.estimate = Matrix::Zero(n2, n1);
        result.iterations_used = 1;
        result.converged = true;
        result.final_objective = 0.5 * Y.squaredNorm();
        result.objective_trace.push_back(result.final_objective);
        return result;
    }
    result.objective_trace.reserve(static_cast<std::size_t>(std::min(config.max_iterations, 10000)));

    previous = project(std::move(previous));
    Matrix lookahead = previous;
    Matrix current;

    // Factors of the two most recent iterates, when they are exact prox
    // outputs. The start point is factored only when it is zero.
    const Matrix Wt = W.transpose();
    const Matrix Yt = Y.transpose();
    std::optional<SvdFactors> newest, older;
    if (previous.isZero(0.0)) {
        SvdFactors zero{Matrix(n2, 0), Vector(0), Matrix(0, n1)};
        newest = zero;
        older = std::move(zero);
    }

    double alpha = 1.0;
    double change = 0.0;
    int iteration = 0;
    while (iteration < config.max_iterations) {
        ++iteration;
        // W'(WZ) rather than (W'W)Z: K x N2 x N1 work instead of N2^2 x N1.
        const Matrix gradient = Wt * (W * lookahead) - WtY;
        double nuc = 0.0;
        if (tau == 0.0) {
            // No penalty: the prox is the identity and lambda * nuc vanishes.
            current = lookahead - gradient / L;
            older.reset();
            newest.reset();
        } else {
            SvdFactors step = proxStep(lookahead - gradient / L, tau, newest ? &*newest : nullptr,
                                       older ? &*older : nullptr, Wt, Yt);
            nuc = step.singular_values.sum();
            current = step.reconstruct();
            older = std::move(newest);
            newest = std::move(step);
        }
        if (config.per_iteration_projection) {
            current = project(std::move(current));
            if (config.lambda != 0.0) nuc = nuclearNorm(current);
            newest.reset();
        }
        result.objective_trace.push_back(0.5 * residualSquaredNorm(current, problem) +
                                         config.lambda * nuc);

        const double alpha_prev = alpha;
        alpha = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha_prev * alpha_prev));
        lookahead = current + ((alpha_prev - 1.0) / alpha) * (current - previous);

        change = (previous - current).norm();
        previous.swap(current);
        if (change <= config.epsilon) break;
    }

    result.estimate = project(std::move(previous));
    result.iterations_used = iteration;
    result.final_change = change;
    result.converged = change <= config.epsilon;
    if (!result.estimate.allFinite()) {
        throw NumericalFailure("solver produced non-finite entries");
    }
    result.final_objective = objective(result.estimate, problem, config.lambda);
    return result;
}

Matrix exactLeastSquares(const Problem& problem) {
    const Matrix& W = problem.traits();
    if (W.rows() < W.cols()) {
        throw SingularSystem("W'W is singular: K = " + std::to_string(W.rows()) +
                             " traits cannot identify N2 = " + std::to_string(W.cols()) +
                             " agents");
    }
    const Vector s = singularValues(W);
    if (s(s.size() - 1) <= 1e-10 * s(0)) {
        throw SingularSystem("W does not have full column rank; W'W is not invertible");
    }
    return W.colPivHouseholderQr().solve(problem.ard());
}

}  // namespace ardnet
