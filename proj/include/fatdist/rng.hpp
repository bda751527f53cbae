#pragma once

#include <cstdint>
#include <random>

#include "fatdist/core.hpp"

namespace fatdist {

/// splitmix64 step; used to derive independent per-trial seeds from a
/// base seed and a counter.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double gaussian() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }

    Vector gaussian_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = gaussian();
        return v;
    }

    Matrix gaussian_matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) m(i, j) = gaussian();
        return m;
    }

    Vector unit_vector(Index n) {
        Vector v = gaussian_vector(n);
        while (v.norm() < 1e-6) v = gaussian_vector(n);
        return v / v.norm();
    }

    Matrix skew_matrix(Index n) {
        Matrix m = gaussian_matrix(n, n);
        return m - m.transpose().eval();
    }

    /// Random invertible matrix with 2-norm condition number <= max_cond.
    Matrix well_conditioned(Index n, double max_cond = 1e3) {
        Matrix g = gaussian_matrix(n, n);
        Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vector s(n);
        for (Index i = 0; i < n; ++i)
            s(i) = 1.0 + (max_cond - 1.0) * uniform();
        return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace fatdist
