#include "ardnet/linalg.hpp"

#include "ardnet/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace ardnet {

namespace {

bool isDiagonal(const Matrix& A) {
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (i != j && A(i, j) != 0.0) return false;
    return true;
}

// Exact SVD of a (rectangular) diagonal matrix: signed unit vectors and the
// sorted absolute diagonal. Divide and conquer rescales its input, which
// costs an ulp on the singular values.
SvdFactors diagonalSvd(const Matrix& A, bool want_vectors) {
    const Eigen::Index k = std::min(A.rows(), A.cols());
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return std::abs(A(a, a)) > std::abs(A(b, b));
    });
    SvdFactors out;
    out.singular_values.resize(k);
    if (want_vectors) {
        out.U = Matrix::Zero(A.rows(), k);
        out.Vt = Matrix::Zero(k, A.cols());
    }
    for (Eigen::Index r = 0; r < k; ++r) {
        const Eigen::Index i = order[static_cast<std::size_t>(r)];
        out.singular_values(r) = std::abs(A(i, i));
        if (want_vectors) {
            out.U(i, r) = A(i, i) < 0.0 ? -1.0 : 1.0;
            out.Vt(r, i) = 1.0;
        }
    }
    return out;
}

SvdFactors bidiagonalSvd(const Matrix& A, bool want_vectors) {
    if (isDiagonal(A)) return diagonalSvd(A, want_vectors);
    const unsigned options = want_vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
    const Eigen::BDCSVD<Matrix> dc(A, options);
    if (dc.info() != Eigen::Success) {
        throw NumericalFailure("SVD failed to converge");
    }
    SvdFactors out;
    out.singular_values = dc.singularValues();
    if (want_vectors) {
        out.U = dc.matrixU();
        out.Vt = dc.matrixV().transpose();
    }
    return out;
}

}  // namespace

Matrix SvdFactors::reconstruct() const {
    return U * singular_values.asDiagonal() * Vt;
}

void requireFinite(const Matrix& A, std::string_view what) {
    if (A.rows() == 0 || A.cols() == 0) {
        throw InvalidInput(std::string(what) + " has an empty dimension");
    }
    if (!A.allFinite()) {
        throw InvalidInput(std::string(what) + " contains non-finite entries");
    }
}

SvdFactors svd(const Matrix& A) {
    requireFinite(A, "svd input");
    return bidiagonalSvd(A, true);
}

Vector singularValues(const Matrix& A) {
    requireFinite(A, "svd input");
    return bidiagonalSvd(A, false).singular_values;
}

double nuclearNorm(const Matrix& A) { return singularValues(A).sum(); }

double frobeniusNorm(const Matrix& A) {
    requireFinite(A, "frobeniusNorm input");
    return A.norm();
}

double spectralNorm(const Matrix& A) { return singularValues(A)(0); }

double nuclearFrobeniusRatio(const Matrix& A) {
    const Vector s = singularValues(A);
    const double frob = s.norm();
    if (frob == 0.0) {
        throw UndefinedRatio("effective rank of the zero matrix is undefined");
    }
    return s.sum() / frob;
}

double effectiveRank(const Matrix& A) {
    const double r = nuclearFrobeniusRatio(A);
    return r * r;
}

Eigen::Index numericalRank(const Matrix& A, double relative_tolerance) {
    const Vector s = singularValues(A);
    if (s(0) == 0.0) return 0;
    const double cutoff = relative_tolerance * s(0);
    return (s.array() > cutoff).count();
}

Matrix softThresholdSingularValues(const Matrix& C, double tau, double& shrunk_nuclear_norm) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw InvalidInput("shrinkage amount must be a finite nonnegative number");
    }
    const SvdFactors f = svd(C);
    // Singular values are sorted, so the surviving directions form a prefix.
    Eigen::Index keep = 0;
    while (keep < f.singular_values.size() && f.singular_values(keep) > tau) ++keep;

    const Vector shrunk = (f.singular_values.head(keep).array() - tau).matrix();
    shrunk_nuclear_norm = shrunk.sum();
    if (keep == 0) return Matrix::Zero(C.rows(), C.cols());
    return f.U.leftCols(keep) * shrunk.asDiagonal() * f.Vt.topRows(keep);
}

Matrix softThresholdSingularValues(const Matrix& C, double tau) {
    double ignored = 0.0;
    return softThresholdSingularValues(C, tau, ignored);
}

}  // namespace ardnet
