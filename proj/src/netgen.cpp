#include "ardnet/netgen.hpp"

#include "ardnet/errors.hpp"

#include <cctype>
#include <cmath>
#include <string>
#include <vector>

namespace ardnet {

namespace {

void requireUnitInterval(const Matrix& M, std::string_view what) {
    if (((M.array() < 0.0) || (M.array() > 1.0)).any()) {
        throw InvalidInput(std::string(what) + " entries must lie in [0,1]");
    }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string_view modelName(NetworkModel model) noexcept {
    switch (model) {
        case NetworkModel::LatentSpace: return "LSM";
        case NetworkModel::RandomDotProduct: return "RDP";
        case NetworkModel::StochasticBlock: return "SBM";
    }
    return "?";
}

NetworkModel parseModel(std::string_view name) {
    std::string lower(name);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "lsm") return NetworkModel::LatentSpace;
    if (lower == "rdp") return NetworkModel::RandomDotProduct;
    if (lower == "sbm") return NetworkModel::StochasticBlock;
    throw InvalidInput("unknown network model '" + std::string(name) + "' (expected lsm, rdp or sbm)");
}

void NetworkModelSpec::validate() const {
    if (n < 1) throw InvalidInput("network size n must be positive");
    if (model == NetworkModel::StochasticBlock) {
        if (blocks < 1) throw InvalidInput("SBM needs at least one block");
        if (!(theta_within >= 0.0 && theta_within <= 1.0) ||
            !(theta_between >= 0.0 && theta_between <= 1.0)) {
            throw InvalidInput("SBM link probabilities must lie in [0,1]");
        }
    }
}

Matrix latentSpaceProbabilities(std::span<const double> effects, const Matrix& positions) {
    const auto n = static_cast<Eigen::Index>(effects.size());
    if (n == 0 || positions.rows() != n) {
        throw InvalidInput("latent space model needs one position row per agent effect");
    }
    Matrix M = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double dist = (positions.row(i) - positions.row(j)).norm();
            const double m = logistic(effects[i] + effects[j] - dist);
            M(i, j) = m;
            M(j, i) = m;
        }
    }
    return M;
}

Matrix dotProductProbabilities(std::span<const double> uniforms) {
    const auto n = static_cast<Eigen::Index>(uniforms.size());
    if (n == 0) throw InvalidInput("dot product model needs at least one agent");
    Vector root(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(uniforms[i] >= 0.0 && uniforms[i] <= 1.0)) {
            throw InvalidInput("dot product latent values must lie in [0,1]");
        }
        root(i) = std::sqrt(uniforms[i]);
    }
    Matrix M = root * root.transpose();
    M.diagonal().setZero();
    return M;
}

int blockOf(long i, long n, int blocks) noexcept {
    return static_cast<int>((i * static_cast<long>(blocks)) / n);
}

Matrix blockProbabilities(long n, int blocks, double theta_within, double theta_between) {
    NetworkModelSpec{NetworkModel::StochasticBlock, n, blocks, theta_within, theta_between}
        .validate();
    Matrix M(n, n);
    for (long i = 0; i < n; ++i) {
        const int bi = blockOf(i, n, blocks);
        for (long j = 0; j < n; ++j) {
            M(i, j) = (i == j) ? 0.0 : (bi == blockOf(j, n, blocks) ? theta_within : theta_between);
        }
    }
    return M;
}

Matrix probabilityMatrix(const NetworkModelSpec& spec, Seed seed) {
    spec.validate();
    Rng rng(seed);
    switch (spec.model) {
        case NetworkModel::LatentSpace: {
            std::vector<double> effects(static_cast<std::size_t>(spec.n));
            for (double& v : effects) v = rng.normal();
            Matrix positions(spec.n, 2);
            for (long i = 0; i < spec.n; ++i) {
                positions(i, 0) = rng.uniform();
                positions(i, 1) = rng.uniform();
            }
            return latentSpaceProbabilities(effects, positions);
        }
        case NetworkModel::RandomDotProduct: {
            std::vector<double> u(static_cast<std::size_t>(spec.n));
            for (double& v : u) v = rng.uniform();
            return dotProductProbabilities(u);
        }
        case NetworkModel::StochasticBlock:
            return blockProbabilities(spec.n, spec.blocks, spec.theta_within, spec.theta_between);
    }
    throw InvalidInput("unknown network model");
}

Matrix sampleAdjacency(const Matrix& M, Seed seed) {
    requireFinite(M, "probability matrix");
    if (M.rows() != M.cols()) throw InvalidInput("probability matrix must be square to sample a graph");
    requireUnitInterval(M, "probability matrix");
    Rng rng(seed);
    const Eigen::Index n = M.rows();
    Matrix G = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (rng.bernoulli(M(i, j))) {
                G(i, j) = 1.0;
                G(j, i) = 1.0;
            }
        }
    }
    return G;
}

Matrix generateTraits(long k, long n2, Seed seed) {
    if (k < 1 || n2 < 1) throw InvalidInput("trait matrix dimensions must be positive");
    Rng rng(seed);
    Matrix W(k, n2);
    for (long r = 0; r < k; ++r) {
        for (long c = 0; c < n2; ++c) W(r, c) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    return W;
}

Matrix generateArd(const Matrix& adjacency, const Matrix& traits) {
    requireFinite(adjacency, "adjacency matrix");
    requireFinite(traits, "trait matrix");
    if (traits.cols() != adjacency.rows()) {
        throw InvalidInput("trait matrix has " + std::to_string(traits.cols()) +
                           " columns but adjacency matrix has " +
                           std::to_string(adjacency.rows()) + " rows");
    }
    return traits * adjacency;
}

long defaultTraitCount(long n) {
    if (n < 1) throw InvalidInput("defaultTraitCount needs n >= 1");
    return static_cast<long>(std::floor(std::sqrt(static_cast<double>(n)) + 0.5));
}

}  // namespace ardnet
