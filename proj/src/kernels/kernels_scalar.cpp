#include <cmath>
#include <cstring>

#include "hetpanel/kernels/kernels.hpp"

// Reference kernels. Plain loops, no intrinsics; every SIMD variant is
// validated against these.

namespace hetpanel::kernels {
namespace {

void gemm_nn_s(std::int64_t m, std::int64_t n, std::int64_t k,
               const double* A, const double* B, double* C, bool accumulate) {
    if (!accumulate) std::memset(C, 0, sizeof(double) * static_cast<std::size_t>(m * n));
    for (std::int64_t i = 0; i < m; ++i) {
        const double* a = A + i * k;
        double* c = C + i * n;
        for (std::int64_t p = 0; p < k; ++p) {
            const double av = a[p];
            if (av == 0.0) continue;
            const double* b = B + p * n;
            for (std::int64_t j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void gemm_nt_s(std::int64_t m, std::int64_t n, std::int64_t k,
               const double* A, const double* B, double* C, bool accumulate) {
    for (std::int64_t i = 0; i < m; ++i) {
        const double* a = A + i * k;
        double* c = C + i * n;
        for (std::int64_t j = 0; j < n; ++j) {
            const double* b = B + j * k;
            double acc = 0.0;
            for (std::int64_t p = 0; p < k; ++p) acc += a[p] * b[p];
            c[j] = accumulate ? c[j] + acc : acc;
        }
    }
}

void gemm_tn_s(std::int64_t m, std::int64_t n, std::int64_t k,
               const double* A, const double* B, double* C, bool accumulate) {
    if (!accumulate) std::memset(C, 0, sizeof(double) * static_cast<std::size_t>(m * n));
    for (std::int64_t p = 0; p < k; ++p) {
        const double* a = A + p * m;
        const double* b = B + p * n;
        for (std::int64_t i = 0; i < m; ++i) {
            const double av = a[i];
            if (av == 0.0) continue;
            double* c = C + i * n;
            for (std::int64_t j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void axpy_s(std::int64_t n, double a, const double* x, double* y) {
    for (std::int64_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal_s(std::int64_t n, double a, double* x) {
    for (std::int64_t i = 0; i < n; ++i) x[i] *= a;
}

void vadd_s(std::int64_t n, const double* x, const double* y, double* out) {
    for (std::int64_t i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void vsub_s(std::int64_t n, const double* x, const double* y, double* out) {
    for (std::int64_t i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void vmul_s(std::int64_t n, const double* x, const double* y, double* out) {
    for (std::int64_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

double dot_s(std::int64_t n, const double* x, const double* y) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double vsum_s(std::int64_t n, const double* x) {
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void sub_sq_acc_s(std::int64_t n, const double* x, const double* mu, double* acc) {
    for (std::int64_t i = 0; i < n; ++i) {
        const double d = x[i] - mu[i];
        acc[i] += d * d;
    }
}

void head_gemm_nn_s(std::int64_t L, std::int64_t h, std::int64_t dh,
                    const double* X, const double* W, double* Y, bool accumulate) {
    const std::int64_t d = h * dh;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* x = X + l * d + i * dh;
            const double* w = W + i * dh * dh;
            double* y = Y + l * d + i * dh;
            for (std::int64_t c = 0; c < dh; ++c) {
                double acc = accumulate ? y[c] : 0.0;
                for (std::int64_t r = 0; r < dh; ++r) acc += x[r] * w[r * dh + c];
                y[c] = acc;
            }
        }
    }
}

void head_gemm_nt_s(std::int64_t L, std::int64_t h, std::int64_t dh,
                    const double* X, const double* W, double* Y, bool accumulate) {
    const std::int64_t d = h * dh;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* x = X + l * d + i * dh;
            const double* w = W + i * dh * dh;
            double* y = Y + l * d + i * dh;
            for (std::int64_t c = 0; c < dh; ++c) {
                double acc = accumulate ? y[c] : 0.0;
                const double* wr = w + c * dh;
                for (std::int64_t r = 0; r < dh; ++r) acc += x[r] * wr[r];
                y[c] = acc;
            }
        }
    }
}

void head_outer_acc_s(std::int64_t L, std::int64_t h, std::int64_t dh,
                      const double* X, const double* G, double* dW) {
    const std::int64_t d = h * dh;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* x = X + l * d + i * dh;
            const double* g = G + l * d + i * dh;
            double* w = dW + i * dh * dh;
            for (std::int64_t r = 0; r < dh; ++r) {
                const double xv = x[r];
                if (xv == 0.0) continue;
                double* wr = w + r * dh;
                for (std::int64_t c = 0; c < dh; ++c) wr[c] += xv * g[c];
            }
        }
    }
}

void head_rowdot_s(std::int64_t L, std::int64_t h, std::int64_t dh,
                   const double* A, const double* B, double* out) {
    const std::int64_t d = h * dh;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* a = A + l * d + i * dh;
            const double* b = B + l * d + i * dh;
            double acc = 0.0;
            for (std::int64_t c = 0; c < dh; ++c) acc += a[c] * b[c];
            out[l * h + i] = acc;
        }
    }
}

void head_scale_s(std::int64_t L, std::int64_t h, std::int64_t dh,
                  const double* M, const double* S, double* out, bool accumulate) {
    const std::int64_t d = h * dh;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double s = S[l * h + i];
            const double* m = M + l * d + i * dh;
            double* y = out + l * d + i * dh;
            for (std::int64_t c = 0; c < dh; ++c)
                y[c] = (accumulate ? y[c] : 0.0) + m[c] * s;
        }
    }
}

void adam_update_s(std::int64_t n, double* p, const double* g, double* m, double* v,
                   double beta1, double beta2, double bc1, double bc2,
                   double lr, double eps, double wd) {
    for (std::int64_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * p[i]);
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        gemm_nn_s, gemm_nt_s, gemm_tn_s,
        axpy_s, scal_s, vadd_s, vsub_s, vmul_s, dot_s, vsum_s, sub_sq_acc_s,
        head_gemm_nn_s, head_gemm_nt_s, head_outer_acc_s, head_rowdot_s, head_scale_s,
        adam_update_s,
    };
    return table;
}

}  // namespace hetpanel::kernels
