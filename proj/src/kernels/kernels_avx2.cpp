// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 only; dispatch.cpp decides at runtime whether the
// CPU can execute it.

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "hetpanel/kernels/kernels.hpp"

namespace hetpanel::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void gemm_nn_v(std::int64_t m, std::int64_t n, std::int64_t k,
               const double* A, const double* B, double* C, bool accumulate) {
    if (!accumulate) std::memset(C, 0, sizeof(double) * static_cast<std::size_t>(m * n));
    const std::int64_t n4 = n & ~3ll;
    for (std::int64_t i = 0; i < m; ++i) {
        const double* a = A + i * k;
        double* c = C + i * n;
        for (std::int64_t p = 0; p < k; ++p) {
            const double av = a[p];
            if (av == 0.0) continue;
            const __m256d va = _mm256_set1_pd(av);
            const double* b = B + p * n;
            std::int64_t j = 0;
            for (; j < n4; j += 4) {
                __m256d vc = _mm256_loadu_pd(c + j);
                vc = _mm256_fmadd_pd(va, _mm256_loadu_pd(b + j), vc);
                _mm256_storeu_pd(c + j, vc);
            }
            for (; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void gemm_nt_v(std::int64_t m, std::int64_t n, std::int64_t k,
               const double* A, const double* B, double* C, bool accumulate) {
    const std::int64_t k4 = k & ~3ll;
    for (std::int64_t i = 0; i < m; ++i) {
        const double* a = A + i * k;
        double* c = C + i * n;
        for (std::int64_t j = 0; j < n; ++j) {
            const double* b = B + j * k;
            __m256d vacc = _mm256_setzero_pd();
            std::int64_t p = 0;
            for (; p < k4; p += 4)
                vacc = _mm256_fmadd_pd(_mm256_loadu_pd(a + p), _mm256_loadu_pd(b + p), vacc);
            double acc = hsum(vacc);
            for (; p < k; ++p) acc += a[p] * b[p];
            c[j] = accumulate ? c[j] + acc : acc;
        }
    }
}

void gemm_tn_v(std::int64_t m, std::int64_t n, std::int64_t k,
               const double* A, const double* B, double* C, bool accumulate) {
    if (!accumulate) std::memset(C, 0, sizeof(double) * static_cast<std::size_t>(m * n));
    const std::int64_t n4 = n & ~3ll;
    for (std::int64_t p = 0; p < k; ++p) {
        const double* a = A + p * m;
        const double* b = B + p * n;
        for (std::int64_t i = 0; i < m; ++i) {
            const double av = a[i];
            if (av == 0.0) continue;
            const __m256d va = _mm256_set1_pd(av);
            double* c = C + i * n;
            std::int64_t j = 0;
            for (; j < n4; j += 4) {
                __m256d vc = _mm256_loadu_pd(c + j);
                vc = _mm256_fmadd_pd(va, _mm256_loadu_pd(b + j), vc);
                _mm256_storeu_pd(c + j, vc);
            }
            for (; j < n; ++j) c[j] += av * b[j];
        }
    }
}

void axpy_v(std::int64_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal_v(std::int64_t n, double a, double* x) {
    const __m256d va = _mm256_set1_pd(a);
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void vadd_v(std::int64_t n, const double* x, const double* y, double* out) {
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] + y[i];
}

void vsub_v(std::int64_t n, const double* x, const double* y, double* out) {
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] - y[i];
}

void vmul_v(std::int64_t n, const double* x, const double* y, double* out) {
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] * y[i];
}

double dot_v(std::int64_t n, const double* x, const double* y) {
    __m256d vacc = _mm256_setzero_pd();
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4)
        vacc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), vacc);
    double acc = hsum(vacc);
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double vsum_v(std::int64_t n, const double* x) {
    __m256d vacc = _mm256_setzero_pd();
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
    double acc = hsum(vacc);
    for (; i < n; ++i) acc += x[i];
    return acc;
}

void sub_sq_acc_v(std::int64_t n, const double* x, const double* mu, double* acc) {
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mu + i));
        _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(d, d, _mm256_loadu_pd(acc + i)));
    }
    for (; i < n; ++i) {
        const double d = x[i] - mu[i];
        acc[i] += d * d;
    }
}

void head_gemm_nn_v(std::int64_t L, std::int64_t h, std::int64_t dh,
                    const double* X, const double* W, double* Y, bool accumulate) {
    const std::int64_t d = h * dh;
    const std::int64_t dh4 = dh & ~3ll;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* x = X + l * d + i * dh;
            const double* w = W + i * dh * dh;
            double* y = Y + l * d + i * dh;
            std::int64_t c = 0;
            for (; c < dh4; c += 4) {
                __m256d vacc = accumulate ? _mm256_loadu_pd(y + c) : _mm256_setzero_pd();
                for (std::int64_t r = 0; r < dh; ++r)
                    vacc = _mm256_fmadd_pd(_mm256_set1_pd(x[r]),
                                           _mm256_loadu_pd(w + r * dh + c), vacc);
                _mm256_storeu_pd(y + c, vacc);
            }
            for (; c < dh; ++c) {
                double acc = accumulate ? y[c] : 0.0;
                for (std::int64_t r = 0; r < dh; ++r) acc += x[r] * w[r * dh + c];
                y[c] = acc;
            }
        }
    }
}

void head_gemm_nt_v(std::int64_t L, std::int64_t h, std::int64_t dh,
                    const double* X, const double* W, double* Y, bool accumulate) {
    const std::int64_t d = h * dh;
    const std::int64_t dh4 = dh & ~3ll;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* x = X + l * d + i * dh;
            const double* w = W + i * dh * dh;
            double* y = Y + l * d + i * dh;
            for (std::int64_t c = 0; c < dh; ++c) {
                const double* wr = w + c * dh;
                __m256d vacc = _mm256_setzero_pd();
                std::int64_t r = 0;
                for (; r < dh4; r += 4)
                    vacc = _mm256_fmadd_pd(_mm256_loadu_pd(x + r), _mm256_loadu_pd(wr + r), vacc);
                double acc = hsum(vacc);
                for (; r < dh; ++r) acc += x[r] * wr[r];
                y[c] = (accumulate ? y[c] : 0.0) + acc;
            }
        }
    }
}

void head_outer_acc_v(std::int64_t L, std::int64_t h, std::int64_t dh,
                      const double* X, const double* G, double* dW) {
    const std::int64_t d = h * dh;
    const std::int64_t dh4 = dh & ~3ll;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* x = X + l * d + i * dh;
            const double* g = G + l * d + i * dh;
            double* w = dW + i * dh * dh;
            for (std::int64_t r = 0; r < dh; ++r) {
                const double xv = x[r];
                if (xv == 0.0) continue;
                const __m256d vx = _mm256_set1_pd(xv);
                double* wr = w + r * dh;
                std::int64_t c = 0;
                for (; c < dh4; c += 4) {
                    __m256d vw = _mm256_loadu_pd(wr + c);
                    vw = _mm256_fmadd_pd(vx, _mm256_loadu_pd(g + c), vw);
                    _mm256_storeu_pd(wr + c, vw);
                }
                for (; c < dh; ++c) wr[c] += xv * g[c];
            }
        }
    }
}

void head_rowdot_v(std::int64_t L, std::int64_t h, std::int64_t dh,
                   const double* A, const double* B, double* out) {
    const std::int64_t d = h * dh;
    const std::int64_t dh4 = dh & ~3ll;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const double* a = A + l * d + i * dh;
            const double* b = B + l * d + i * dh;
            __m256d vacc = _mm256_setzero_pd();
            std::int64_t c = 0;
            for (; c < dh4; c += 4)
                vacc = _mm256_fmadd_pd(_mm256_loadu_pd(a + c), _mm256_loadu_pd(b + c), vacc);
            double acc = hsum(vacc);
            for (; c < dh; ++c) acc += a[c] * b[c];
            out[l * h + i] = acc;
        }
    }
}

void head_scale_v(std::int64_t L, std::int64_t h, std::int64_t dh,
                  const double* M, const double* S, double* out, bool accumulate) {
    const std::int64_t d = h * dh;
    const std::int64_t dh4 = dh & ~3ll;
    for (std::int64_t l = 0; l < L; ++l) {
        for (std::int64_t i = 0; i < h; ++i) {
            const __m256d vs = _mm256_set1_pd(S[l * h + i]);
            const double s = S[l * h + i];
            const double* m = M + l * d + i * dh;
            double* y = out + l * d + i * dh;
            std::int64_t c = 0;
            for (; c < dh4; c += 4) {
                const __m256d vm = _mm256_loadu_pd(m + c);
                if (accumulate)
                    _mm256_storeu_pd(y + c, _mm256_fmadd_pd(vm, vs, _mm256_loadu_pd(y + c)));
                else
                    _mm256_storeu_pd(y + c, _mm256_mul_pd(vm, vs));
            }
            for (; c < dh; ++c) y[c] = (accumulate ? y[c] : 0.0) + m[c] * s;
        }
    }
}

void adam_update_v(std::int64_t n, double* p, const double* g, double* m, double* v,
                   double beta1, double beta2, double bc1, double bc2,
                   double lr, double eps, double wd) {
    const __m256d vb1 = _mm256_set1_pd(beta1);
    const __m256d vb2 = _mm256_set1_pd(beta2);
    const __m256d vib1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d vib2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d vbc1 = _mm256_set1_pd(1.0 / bc1);
    const __m256d vbc2 = _mm256_set1_pd(1.0 / bc2);
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d vwd = _mm256_set1_pd(wd);
    std::int64_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vg = _mm256_loadu_pd(g + i);
        __m256d vm = _mm256_fmadd_pd(vib1, vg, _mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)));
        __m256d vv = _mm256_fmadd_pd(vib2, _mm256_mul_pd(vg, vg),
                                     _mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)));
        _mm256_storeu_pd(m + i, vm);
        _mm256_storeu_pd(v + i, vv);
        const __m256d mhat = _mm256_mul_pd(vm, vbc1);
        const __m256d vhat = _mm256_mul_pd(vv, vbc2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        __m256d vp = _mm256_loadu_pd(p + i);
        const __m256d step = _mm256_fmadd_pd(vwd, vp, _mm256_div_pd(mhat, denom));
        vp = _mm256_fnmadd_pd(vlr, step, vp);
        _mm256_storeu_pd(p + i, vp);
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * p[i]);
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops table = {
        gemm_nn_v, gemm_nt_v, gemm_tn_v,
        axpy_v, scal_v, vadd_v, vsub_v, vmul_v, dot_v, vsum_v, sub_sq_acc_v,
        head_gemm_nn_v, head_gemm_nt_v, head_outer_acc_v, head_rowdot_v, head_scale_v,
        adam_update_v,
    };
    return table;
}

}  // namespace hetpanel::kernels

#endif  // __AVX2__ && __FMA__
