#pragma once

// Dense row-major double tensors and the three GEMM variants the encoder
// needs. Every output element is produced by exactly one thread with a fixed
// summation order, so results are bit-identical across runs and thread
// counts.

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "jmlm/errors.hpp"

namespace jmlm {

class ShapeMismatch : public DataError {
public:
    explicit ShapeMismatch(const std::string& message) : DataError("shape-error", message) {}
};

struct Tensor {
    std::vector<std::int64_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::int64_t> dims) : shape(std::move(dims)) {
        data.assign(std::size_t(numel_of(shape)), 0.0);
    }
    Tensor(std::initializer_list<std::int64_t> dims)
        : Tensor(std::vector<std::int64_t>(dims)) {}

    static std::int64_t numel_of(const std::vector<std::int64_t>& dims) {
        std::int64_t n = 1;
        for (const auto d : dims) n *= d;
        return n;
    }

    std::int64_t numel() const noexcept { return std::int64_t(data.size()); }
    std::int64_t dim(std::size_t i) const { return shape.at(i); }

    double* ptr() noexcept { return data.data(); }
    const double* ptr() const noexcept { return data.data(); }

    double& at(std::int64_t i) { return data[std::size_t(i)]; }
    double at(std::int64_t i) const { return data[std::size_t(i)]; }
    double& at(std::int64_t r, std::int64_t c) { return data[std::size_t(r * shape[1] + c)]; }
    double at(std::int64_t r, std::int64_t c) const {
        return data[std::size_t(r * shape[1] + c)];
    }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
    void zero() { fill(0.0); }
};

// C[M,N] (+)= A[M,K] * B[K,N]
inline void matmul_nn(std::int64_t M, std::int64_t N, std::int64_t K, const double* A,
                      const double* B, double* C, bool accumulate = false) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < M; ++i) {
        double* c = C + i * N;
        if (!accumulate) {
            for (std::int64_t j = 0; j < N; ++j) c[j] = 0.0;
        }
        const double* a = A + i * K;
        for (std::int64_t k = 0; k < K; ++k) {
            const double av = a[k];
            const double* b = B + k * N;
#pragma omp simd
            for (std::int64_t j = 0; j < N; ++j) c[j] += av * b[j];
        }
    }
}

// C[M,N] (+)= A[M,K] * B[N,K]^T
// Row tiles keep each B row hot across the tile instead of re-streaming the
// whole of B for every output row; essential when N*K spills the cache
// (the vocabulary projection).
inline void matmul_nt(std::int64_t M, std::int64_t N, std::int64_t K, const double* A,
                      const double* B, double* C, bool accumulate = false) {
    constexpr std::int64_t TI = 48;
#pragma omp parallel for schedule(static)
    for (std::int64_t i0 = 0; i0 < M; i0 += TI) {
        const std::int64_t i1 = std::min(M, i0 + TI);
        if (!accumulate) {
            for (std::int64_t i = i0; i < i1; ++i) {
                double* c = C + i * N;
                for (std::int64_t j = 0; j < N; ++j) c[j] = 0.0;
            }
        }
        for (std::int64_t j = 0; j < N; ++j) {
            const double* b = B + j * K;
            for (std::int64_t i = i0; i < i1; ++i) {
                const double* a = A + i * K;
                double sum = 0.0;
#pragma omp simd reduction(+ : sum)
                for (std::int64_t k = 0; k < K; ++k) sum += a[k] * b[k];
                C[i * N + j] += sum;
            }
        }
    }
}

// C[M,N] (+)= A[K,M]^T * B[K,N]
// Same tiling idea: within a row tile, the A values needed per k step are
// contiguous, and the C tile stays cache-resident while B streams once.
inline void matmul_tn(std::int64_t M, std::int64_t N, std::int64_t K, const double* A,
                      const double* B, double* C, bool accumulate = false) {
    constexpr std::int64_t TI = 48;
#pragma omp parallel for schedule(static)
    for (std::int64_t i0 = 0; i0 < M; i0 += TI) {
        const std::int64_t i1 = std::min(M, i0 + TI);
        if (!accumulate) {
            for (std::int64_t i = i0; i < i1; ++i) {
                double* c = C + i * N;
                for (std::int64_t j = 0; j < N; ++j) c[j] = 0.0;
            }
        }
        for (std::int64_t k = 0; k < K; ++k) {
            const double* arow = A + k * M;
            const double* b = B + k * N;
            for (std::int64_t i = i0; i < i1; ++i) {
                const double av = arow[i];
                if (av == 0.0) continue;
                double* c = C + i * N;
#pragma omp simd
                for (std::int64_t j = 0; j < N; ++j) c[j] += av * b[j];
            }
        }
    }
}

} // namespace jmlm
