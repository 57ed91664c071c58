#pragma once

#include <cstdint>
#include <string>

namespace hetpanel::kernels {

/// Dense numeric kernels behind a runtime-dispatched function table.
/// Matrices are row-major and contiguous. The scalar implementations are
/// the reference; SIMD variants must agree with them within round-off
/// (checked by the equivalence tests).
struct Ops {
    // C[m x n] = (accumulate ? C : 0) + A[m x k] * B[k x n]
    void (*gemm_nn)(std::int64_t m, std::int64_t n, std::int64_t k,
                    const double* A, const double* B, double* C, bool accumulate);
    // C[m x n] = (accumulate ? C : 0) + A[m x k] * B[n x k]^T
    void (*gemm_nt)(std::int64_t m, std::int64_t n, std::int64_t k,
                    const double* A, const double* B, double* C, bool accumulate);
    // C[m x n] = (accumulate ? C : 0) + A[k x m]^T * B[k x n]
    void (*gemm_tn)(std::int64_t m, std::int64_t n, std::int64_t k,
                    const double* A, const double* B, double* C, bool accumulate);

    void (*axpy)(std::int64_t n, double a, const double* x, double* y);
    void (*scal)(std::int64_t n, double a, double* x);
    void (*vadd)(std::int64_t n, const double* x, const double* y, double* out);
    void (*vsub)(std::int64_t n, const double* x, const double* y, double* out);
    void (*vmul)(std::int64_t n, const double* x, const double* y, double* out);
    double (*dot)(std::int64_t n, const double* x, const double* y);
    double (*vsum)(std::int64_t n, const double* x);
    // acc[j] += (x[j] - mu[j])^2, the variance pass of batch norm.
    void (*sub_sq_acc)(std::int64_t n, const double* x, const double* mu, double* acc);

    // Per-head block operations. X and Y are [L x (h*dh)]; W is h stacked
    // [dh x dh] matrices; S is [L x h]. Head i occupies columns
    // [i*dh, (i+1)*dh).
    void (*head_gemm_nn)(std::int64_t L, std::int64_t h, std::int64_t dh,
                         const double* X, const double* W, double* Y, bool accumulate);
    void (*head_gemm_nt)(std::int64_t L, std::int64_t h, std::int64_t dh,
                         const double* X, const double* W, double* Y, bool accumulate);
    // dW[i] += sum_l x_block(l,i)^T * g_block(l,i)
    void (*head_outer_acc)(std::int64_t L, std::int64_t h, std::int64_t dh,
                           const double* X, const double* G, double* dW);
    // out[l,i] = dot(A_block(l,i), B_block(l,i))
    void (*head_rowdot)(std::int64_t L, std::int64_t h, std::int64_t dh,
                        const double* A, const double* B, double* out);
    // out_block(l,i) = (accumulate ? out_block : 0) + M_block(l,i) * S[l,i]
    void (*head_scale)(std::int64_t L, std::int64_t h, std::int64_t dh,
                       const double* M, const double* S, double* out, bool accumulate);

    // Fused Adam step: updates moments in place, then
    // p -= lr * ( (m/bc1) / (sqrt(v/bc2) + eps) + wd * p ).
    void (*adam_update)(std::int64_t n, double* p, const double* g, double* m, double* v,
                        double beta1, double beta2, double bc1, double bc2,
                        double lr, double eps, double wd);
};

enum class Backend { scalar, avx2 };

/// Active kernel table (selected once at first use from CPU features).
const Ops& ops();

/// Force a specific backend; throws if unavailable. Used by equivalence tests.
void force_backend(Backend b);
void reset_backend();

bool backend_available(Backend b);
std::string active_backend_name();

const Ops& scalar_ops();

}  // namespace hetpanel::kernels
