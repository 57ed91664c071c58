#include "hetpanel/nn/tape.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "hetpanel/core/error.hpp"
#include "hetpanel/kernels/kernels.hpp"

namespace hetpanel {

namespace {

const kernels::Ops& K() { return kernels::ops(); }

void require_rank2(const Tensor& t, const char* op) {
    if (t.rank() != 2) {
        throw UsageError(std::string(op) + ": expected rank-2 tensor, got " + t.shape_str());
    }
}

}  // namespace

int Tape::push(Tensor value, std::function<void()> back, int param_id) {
    Entry e;
    e.grad = Tensor::zeros(value.shape());
    e.val = std::move(value);
    e.back = std::move(back);
    e.param_id = param_id;
    entries_.push_back(std::move(e));
    return static_cast<int>(entries_.size()) - 1;
}

int Tape::param(int param_id) {
    if (store_ == nullptr) throw UsageError("Tape::param: no ParamStore bound");
    const int id = push(store_->value(param_id), {}, param_id);
    entry(id).back = [this, id, param_id]() {
        Tensor& g = entry(id).grad;
        Tensor& pg = store_->grad(param_id);
        K().vadd(g.numel(), pg.data(), g.data(), pg.data());
    };
    return id;
}

int Tape::constant(Tensor value) { return push(std::move(value)); }

int Tape::matmul(int a, int b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    require_rank2(A, "matmul");
    require_rank2(B, "matmul");
    if (A.cols() != B.rows()) {
        throw UsageError("matmul: inner dimensions differ, " + A.shape_str() + " vs " +
                         B.shape_str());
    }
    const std::int64_t m = A.rows(), k = A.cols(), n = B.cols();
    Tensor Y({m, n});
    K().gemm_nn(m, n, k, A.data(), B.data(), Y.data(), false);
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, b, m, n, k]() {
        const Tensor& g = entry(id).grad;
        // dA += g * B^T ; dB += A^T * g
        K().gemm_nt(m, k, n, g.data(), val(b).data(), grad_of(a).data(), true);
        K().gemm_tn(k, n, m, val(a).data(), g.data(), grad_of(b).data(), true);
    };
    return id;
}

int Tape::add(int a, int b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) {
        throw UsageError("add: shape mismatch, " + A.shape_str() + " vs " + B.shape_str());
    }
    Tensor Y(A.shape());
    K().vadd(A.numel(), A.data(), B.data(), Y.data());
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, b]() {
        const Tensor& g = entry(id).grad;
        K().axpy(g.numel(), 1.0, g.data(), grad_of(a).data());
        K().axpy(g.numel(), 1.0, g.data(), grad_of(b).data());
    };
    return id;
}

int Tape::add_row_broadcast(int a, int bias) {
    const Tensor& A = val(a);
    const Tensor& B = val(bias);
    require_rank2(A, "add_row_broadcast");
    if (B.numel() != A.cols()) {
        throw UsageError("add_row_broadcast: bias length " + std::to_string(B.numel()) +
                         " does not match column count " + std::to_string(A.cols()));
    }
    const std::int64_t m = A.rows(), n = A.cols();
    Tensor Y({m, n});
    for (std::int64_t r = 0; r < m; ++r) {
        K().vadd(n, A.row(r), B.data(), Y.data() + r * n);
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, bias, m, n]() {
        const Tensor& g = entry(id).grad;
        K().axpy(g.numel(), 1.0, g.data(), grad_of(a).data());
        Tensor& gb = grad_of(bias);
        for (std::int64_t r = 0; r < m; ++r) {
            K().axpy(n, 1.0, g.data() + r * n, gb.data());
        }
    };
    return id;
}

int Tape::mul_const(int a, double c) {
    Tensor Y = val(a);
    K().scal(Y.numel(), c, Y.data());
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, c]() {
        const Tensor& g = entry(id).grad;
        K().axpy(g.numel(), c, g.data(), grad_of(a).data());
    };
    return id;
}

int Tape::tanh_act(int a) {
    Tensor Y = val(a);
    for (std::int64_t i = 0; i < Y.numel(); ++i) Y[i] = std::tanh(Y[i]);
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a]() {
        const Tensor& g = entry(id).grad;
        const Tensor& y = val(id);
        Tensor& ga = grad_of(a);
        for (std::int64_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
    };
    return id;
}

int Tape::relu_act(int a) {
    Tensor Y = val(a);
    for (std::int64_t i = 0; i < Y.numel(); ++i) Y[i] = Y[i] > 0.0 ? Y[i] : 0.0;
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a]() {
        const Tensor& g = entry(id).grad;
        const Tensor& y = val(id);
        Tensor& ga = grad_of(a);
        for (std::int64_t i = 0; i < g.numel(); ++i) {
            if (y[i] > 0.0) ga[i] += g[i];
        }
    };
    return id;
}

int Tape::gather_rows(int a, std::vector<std::int32_t> idx) {
    const Tensor& A = val(a);
    require_rank2(A, "gather_rows");
    const std::int64_t n = A.cols();
    const std::int64_t L = static_cast<std::int64_t>(idx.size());
    Tensor Y({L, n});
    for (std::int64_t l = 0; l < L; ++l) {
        const std::int32_t r = idx[static_cast<size_t>(l)];
        if (r < 0 || r >= A.rows()) throw UsageError("gather_rows: index out of range");
        std::memcpy(Y.data() + l * n, A.row(r), sizeof(double) * static_cast<size_t>(n));
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, idx = std::move(idx), n]() {
        const Tensor& g = entry(id).grad;
        Tensor& ga = grad_of(a);
        for (size_t l = 0; l < idx.size(); ++l) {
            K().axpy(n, 1.0, g.data() + static_cast<std::int64_t>(l) * n, ga.row(idx[l]));
        }
    };
    return id;
}

int Tape::scatter_add_rows(int a, std::vector<std::int32_t> idx, std::int64_t n_out) {
    const Tensor& A = val(a);
    require_rank2(A, "scatter_add_rows");
    if (A.rows() != static_cast<std::int64_t>(idx.size())) {
        throw UsageError("scatter_add_rows: index count does not match row count");
    }
    const std::int64_t n = A.cols();
    Tensor Y({n_out, n});
    for (size_t l = 0; l < idx.size(); ++l) {
        const std::int32_t r = idx[l];
        if (r < 0 || r >= n_out) throw UsageError("scatter_add_rows: index out of range");
        K().axpy(n, 1.0, A.row(static_cast<std::int64_t>(l)), Y.row(r));
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, idx = std::move(idx), n]() {
        const Tensor& g = entry(id).grad;
        Tensor& ga = grad_of(a);
        for (size_t l = 0; l < idx.size(); ++l) {
            K().axpy(n, 1.0, g.row(idx[l]), ga.row(static_cast<std::int64_t>(l)));
        }
    };
    return id;
}

int Tape::concat_rows(const std::vector<int>& parts) {
    if (parts.empty()) throw UsageError("concat_rows: no inputs");
    const std::int64_t n = val(parts[0]).cols();
    std::int64_t m = 0;
    for (const int p : parts) {
        require_rank2(val(p), "concat_rows");
        if (val(p).cols() != n) throw UsageError("concat_rows: column count mismatch");
        m += val(p).rows();
    }
    Tensor Y({m, n});
    std::int64_t off = 0;
    for (const int p : parts) {
        const Tensor& P = val(p);
        std::memcpy(Y.data() + off * n, P.data(), sizeof(double) * static_cast<size_t>(P.numel()));
        off += P.rows();
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, parts, n]() {
        const Tensor& g = entry(id).grad;
        std::int64_t off2 = 0;
        for (const int p : parts) {
            Tensor& gp = grad_of(p);
            K().axpy(gp.numel(), 1.0, g.data() + off2 * n, gp.data());
            off2 += gp.rows();
        }
    };
    return id;
}

int Tape::concat_cols(int a, int b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    require_rank2(A, "concat_cols");
    require_rank2(B, "concat_cols");
    if (A.rows() != B.rows()) throw UsageError("concat_cols: row count mismatch");
    const std::int64_t m = A.rows(), na = A.cols(), nb = B.cols();
    Tensor Y({m, na + nb});
    for (std::int64_t r = 0; r < m; ++r) {
        std::memcpy(Y.row(r), A.row(r), sizeof(double) * static_cast<size_t>(na));
        std::memcpy(Y.row(r) + na, B.row(r), sizeof(double) * static_cast<size_t>(nb));
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, b, m, na, nb]() {
        const Tensor& g = entry(id).grad;
        Tensor& ga = grad_of(a);
        Tensor& gb = grad_of(b);
        for (std::int64_t r = 0; r < m; ++r) {
            K().axpy(na, 1.0, g.row(r), ga.row(r));
            K().axpy(nb, 1.0, g.row(r) + na, gb.row(r));
        }
    };
    return id;
}

int Tape::replace_masked_rows(int a, std::vector<std::uint8_t> mask, int null_row) {
    const Tensor& A = val(a);
    require_rank2(A, "replace_masked_rows");
    if (static_cast<std::int64_t>(mask.size()) != A.rows()) {
        throw UsageError("replace_masked_rows: mask length does not match row count");
    }
    const Tensor& N = val(null_row);
    const std::int64_t n = A.cols();
    if (N.numel() != n) {
        throw UsageError("replace_masked_rows: null row width " + std::to_string(N.numel()) +
                         " does not match feature width " + std::to_string(n));
    }
    Tensor Y = A;
    for (std::int64_t r = 0; r < A.rows(); ++r) {
        if (!mask[static_cast<size_t>(r)]) {
            std::memcpy(Y.row(r), N.data(), sizeof(double) * static_cast<size_t>(n));
        }
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, null_row, mask = std::move(mask), n]() {
        const Tensor& g = entry(id).grad;
        Tensor& ga = grad_of(a);
        Tensor& gn = grad_of(null_row);
        for (std::int64_t r = 0; r < g.rows(); ++r) {
            if (mask[static_cast<size_t>(r)]) {
                K().axpy(n, 1.0, g.row(r), ga.row(r));
            } else {
                K().axpy(n, 1.0, g.row(r), gn.data());
            }
        }
    };
    return id;
}

int Tape::scale_rows_const(int a, std::vector<double> factors) {
    const Tensor& A = val(a);
    require_rank2(A, "scale_rows_const");
    if (static_cast<std::int64_t>(factors.size()) != A.rows()) {
        throw UsageError("scale_rows_const: factor count does not match row count");
    }
    const std::int64_t n = A.cols();
    Tensor Y = A;
    for (std::int64_t r = 0; r < A.rows(); ++r) {
        K().scal(n, factors[static_cast<size_t>(r)], Y.row(r));
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, factors = std::move(factors), n]() {
        const Tensor& g = entry(id).grad;
        Tensor& ga = grad_of(a);
        for (std::int64_t r = 0; r < g.rows(); ++r) {
            K().axpy(n, factors[static_cast<size_t>(r)], g.row(r), ga.row(r));
        }
    };
    return id;
}

int Tape::head_matmul(int x, int w, int heads, int dh) {
    const Tensor& X = val(x);
    const Tensor& W = val(w);
    require_rank2(X, "head_matmul");
    if (X.cols() != static_cast<std::int64_t>(heads) * dh) {
        throw UsageError("head_matmul: row width does not equal heads*dh");
    }
    if (W.numel() != static_cast<std::int64_t>(heads) * dh * dh) {
        throw UsageError("head_matmul: weight size does not equal heads*dh*dh");
    }
    const std::int64_t L = X.rows();
    Tensor Y(X.shape());
    K().head_gemm_nn(L, heads, dh, X.data(), W.data(), Y.data(), false);
    const int id = push(std::move(Y));
    entry(id).back = [this, id, x, w, heads, dh, L]() {
        const Tensor& g = entry(id).grad;
        K().head_gemm_nt(L, heads, dh, g.data(), val(w).data(), grad_of(x).data(), true);
        K().head_outer_acc(L, heads, dh, val(x).data(), g.data(), grad_of(w).data());
    };
    return id;
}

int Tape::head_rowdot(int a, int b, int heads, int dh) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    require_rank2(A, "head_rowdot");
    if (!A.same_shape(B)) throw UsageError("head_rowdot: shape mismatch");
    if (A.cols() != static_cast<std::int64_t>(heads) * dh) {
        throw UsageError("head_rowdot: row width does not equal heads*dh");
    }
    const std::int64_t L = A.rows();
    Tensor Y({L, heads});
    K().head_rowdot(L, heads, dh, A.data(), B.data(), Y.data());
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a, b, heads, dh, L]() {
        const Tensor& g = entry(id).grad;
        K().head_scale(L, heads, dh, val(b).data(), g.data(), grad_of(a).data(), true);
        K().head_scale(L, heads, dh, val(a).data(), g.data(), grad_of(b).data(), true);
    };
    return id;
}

int Tape::head_scale(int m, int s, int heads, int dh) {
    const Tensor& M = val(m);
    const Tensor& S = val(s);
    require_rank2(M, "head_scale");
    require_rank2(S, "head_scale");
    if (M.cols() != static_cast<std::int64_t>(heads) * dh || S.cols() != heads ||
        M.rows() != S.rows()) {
        throw UsageError("head_scale: shape mismatch, " + M.shape_str() + " vs " + S.shape_str());
    }
    const std::int64_t L = M.rows();
    Tensor Y(M.shape());
    K().head_scale(L, heads, dh, M.data(), S.data(), Y.data(), false);
    const int id = push(std::move(Y));
    entry(id).back = [this, id, m, s, heads, dh, L]() {
        const Tensor& g = entry(id).grad;
        K().head_scale(L, heads, dh, g.data(), val(s).data(), grad_of(m).data(), true);
        Tensor tmp({L, static_cast<std::int64_t>(heads)});
        K().head_rowdot(L, heads, dh, val(m).data(), g.data(), tmp.data());
        Tensor& gs = grad_of(s);
        K().vadd(gs.numel(), gs.data(), tmp.data(), gs.data());
    };
    return id;
}

int Tape::scale_by_scalar_param(int x, int p, double factor) {
    const Tensor& X = val(x);
    const Tensor& P = val(p);
    if (P.numel() != 1) throw UsageError("scale_by_scalar_param: parameter is not scalar");
    const double c = P[0] * factor;
    Tensor Y = X;
    K().scal(Y.numel(), c, Y.data());
    const int id = push(std::move(Y));
    entry(id).back = [this, id, x, p, factor, c]() {
        const Tensor& g = entry(id).grad;
        K().axpy(g.numel(), c, g.data(), grad_of(x).data());
        grad_of(p)[0] += factor * K().dot(g.numel(), val(x).data(), g.data());
    };
    return id;
}

int Tape::segment_softmax(int logits, std::vector<std::int32_t> seg, std::int64_t n_seg) {
    const Tensor& A = val(logits);
    require_rank2(A, "segment_softmax");
    const std::int64_t L = A.rows(), C = A.cols();
    if (static_cast<std::int64_t>(seg.size()) != L) {
        throw UsageError("segment_softmax: segment id count does not match row count");
    }
    for (const auto s : seg) {
        if (s < 0 || s >= n_seg) throw UsageError("segment_softmax: segment id out of range");
    }
    std::vector<double> mx(static_cast<size_t>(n_seg * C),
                           -std::numeric_limits<double>::infinity());
    for (std::int64_t l = 0; l < L; ++l) {
        double* m = mx.data() + static_cast<std::int64_t>(seg[static_cast<size_t>(l)]) * C;
        const double* row = A.row(l);
        for (std::int64_t c = 0; c < C; ++c) {
            if (row[c] > m[c]) m[c] = row[c];
        }
    }
    Tensor Y({L, C});
    std::vector<double> denom(static_cast<size_t>(n_seg * C), 0.0);
    for (std::int64_t l = 0; l < L; ++l) {
        const double* m = mx.data() + static_cast<std::int64_t>(seg[static_cast<size_t>(l)]) * C;
        double* d = denom.data() + static_cast<std::int64_t>(seg[static_cast<size_t>(l)]) * C;
        const double* row = A.row(l);
        double* out = Y.row(l);
        for (std::int64_t c = 0; c < C; ++c) {
            out[c] = std::exp(row[c] - m[c]);
            d[c] += out[c];
        }
    }
    for (std::int64_t l = 0; l < L; ++l) {
        const double* d = denom.data() + static_cast<std::int64_t>(seg[static_cast<size_t>(l)]) * C;
        double* out = Y.row(l);
        for (std::int64_t c = 0; c < C; ++c) out[c] /= d[c];
    }
    const int id = push(std::move(Y));
    entry(id).back = [this, id, logits, seg = std::move(seg), n_seg, L, C]() {
        const Tensor& g = entry(id).grad;
        const Tensor& alpha = val(id);
        std::vector<double> dotv(static_cast<size_t>(n_seg * C), 0.0);
        for (std::int64_t l = 0; l < L; ++l) {
            double* d = dotv.data() + static_cast<std::int64_t>(seg[static_cast<size_t>(l)]) * C;
            const double* ar = alpha.row(l);
            const double* gr = g.row(l);
            for (std::int64_t c = 0; c < C; ++c) d[c] += ar[c] * gr[c];
        }
        Tensor& gl = grad_of(logits);
        for (std::int64_t l = 0; l < L; ++l) {
            const double* d = dotv.data() + static_cast<std::int64_t>(seg[static_cast<size_t>(l)]) * C;
            const double* ar = alpha.row(l);
            const double* gr = g.row(l);
            double* out = gl.row(l);
            for (std::int64_t c = 0; c < C; ++c) out[c] += ar[c] * (gr[c] - d[c]);
        }
    };
    return id;
}

int Tape::batch_norm(int x, int gamma, int beta, Tensor* running_mean, Tensor* running_var,
                     bool training, double momentum, double eps) {
    const Tensor& X = val(x);
    require_rank2(X, "batch_norm");
    const std::int64_t N = X.rows(), D = X.cols();
    const Tensor& G = val(gamma);
    const Tensor& B = val(beta);
    if (G.numel() != D || B.numel() != D) {
        throw UsageError("batch_norm: gamma/beta width does not match feature width");
    }
    if (running_mean == nullptr || running_var == nullptr ||
        running_mean->numel() != D || running_var->numel() != D) {
        throw UsageError("batch_norm: running statistics missing or mis-sized");
    }

    if (!training) {
        Tensor inv({D});
        Tensor rm = *running_mean;
        for (std::int64_t c = 0; c < D; ++c) inv[c] = 1.0 / std::sqrt((*running_var)[c] + eps);
        Tensor Y({N, D});
        for (std::int64_t r = 0; r < N; ++r) {
            const double* xr = X.row(r);
            double* yr = Y.row(r);
            for (std::int64_t c = 0; c < D; ++c) {
                yr[c] = G[c] * inv[c] * (xr[c] - rm[c]) + B[c];
            }
        }
        const int id = push(std::move(Y));
        entry(id).back = [this, id, x, gamma, beta, inv = std::move(inv), rm = std::move(rm), N,
                          D]() {
            const Tensor& g = entry(id).grad;
            const Tensor& X2 = val(x);
            const Tensor& G2 = val(gamma);
            Tensor& gx = grad_of(x);
            Tensor& gg = grad_of(gamma);
            Tensor& gb = grad_of(beta);
            for (std::int64_t r = 0; r < N; ++r) {
                const double* gr = g.row(r);
                const double* xr = X2.row(r);
                double* gxr = gx.row(r);
                for (std::int64_t c = 0; c < D; ++c) {
                    gxr[c] += gr[c] * G2[c] * inv[c];
                    gg[c] += gr[c] * (xr[c] - rm[c]) * inv[c];
                    gb[c] += gr[c];
                }
            }
        };
        return id;
    }

    if (N == 0) throw UsageError("batch_norm: empty batch");
    Tensor mean({D});
    for (std::int64_t r = 0; r < N; ++r) {
        K().axpy(D, 1.0, X.row(r), mean.data());
    }
    K().scal(D, 1.0 / static_cast<double>(N), mean.data());
    Tensor var({D});
    for (std::int64_t r = 0; r < N; ++r) {
        K().sub_sq_acc(D, X.row(r), mean.data(), var.data());
    }
    K().scal(D, 1.0 / static_cast<double>(N), var.data());

    Tensor invstd({D});
    for (std::int64_t c = 0; c < D; ++c) invstd[c] = 1.0 / std::sqrt(var[c] + eps);

    Tensor xhat({N, D});
    Tensor Y({N, D});
    for (std::int64_t r = 0; r < N; ++r) {
        const double* xr = X.row(r);
        double* hr = xhat.row(r);
        double* yr = Y.row(r);
        for (std::int64_t c = 0; c < D; ++c) {
            hr[c] = (xr[c] - mean[c]) * invstd[c];
            yr[c] = G[c] * hr[c] + B[c];
        }
    }

    // Update running statistics (unbiased variance when N > 1).
    const double unbias = N > 1 ? static_cast<double>(N) / static_cast<double>(N - 1) : 1.0;
    for (std::int64_t c = 0; c < D; ++c) {
        (*running_mean)[c] = (1.0 - momentum) * (*running_mean)[c] + momentum * mean[c];
        (*running_var)[c] = (1.0 - momentum) * (*running_var)[c] + momentum * var[c] * unbias;
    }

    const int id = push(std::move(Y));
    entry(id).back = [this, id, x, gamma, beta, xhat = std::move(xhat),
                      invstd = std::move(invstd), N, D]() {
        const Tensor& g = entry(id).grad;
        const Tensor& G2 = val(gamma);
        Tensor& gx = grad_of(x);
        Tensor& gg = grad_of(gamma);
        Tensor& gb = grad_of(beta);
        Tensor sum_g({D});
        Tensor sum_gh({D});
        for (std::int64_t r = 0; r < N; ++r) {
            const double* gr = g.row(r);
            const double* hr = xhat.row(r);
            for (std::int64_t c = 0; c < D; ++c) {
                sum_g[c] += gr[c];
                sum_gh[c] += gr[c] * hr[c];
            }
        }
        K().vadd(D, gb.data(), sum_g.data(), gb.data());
        K().vadd(D, gg.data(), sum_gh.data(), gg.data());
        const double invn = 1.0 / static_cast<double>(N);
        for (std::int64_t r = 0; r < N; ++r) {
            const double* gr = g.row(r);
            const double* hr = xhat.row(r);
            double* gxr = gx.row(r);
            for (std::int64_t c = 0; c < D; ++c) {
                gxr[c] += G2[c] * invstd[c] *
                          (gr[c] - invn * sum_g[c] - hr[c] * invn * sum_gh[c]);
            }
        }
    };
    return id;
}

int Tape::rmse_loss(int pred, Tensor target) {
    const Tensor& P = val(pred);
    if (!P.same_shape(target)) {
        throw UsageError("rmse_loss: prediction " + P.shape_str() + " vs target " +
                         target.shape_str());
    }
    const std::int64_t n = P.numel();
    if (n == 0) throw UsageError("rmse_loss: empty tensors");
    Tensor diff(P.shape());
    K().vsub(n, P.data(), target.data(), diff.data());
    const double mse = K().dot(n, diff.data(), diff.data()) / static_cast<double>(n);
    Tensor Y({1});
    Y[0] = std::sqrt(mse);
    const int id = push(std::move(Y));
    entry(id).back = [this, id, pred, diff = std::move(diff), n]() {
        const double r = val(id)[0];
        if (r <= 0.0) return;
        const double c = entry(id).grad[0] / (static_cast<double>(n) * r);
        K().axpy(n, c, diff.data(), grad_of(pred).data());
    };
    return id;
}

int Tape::sum_squares(int a) {
    const Tensor& A = val(a);
    Tensor Y({1});
    Y[0] = K().dot(A.numel(), A.data(), A.data());
    const int id = push(std::move(Y));
    entry(id).back = [this, id, a]() {
        const double g = entry(id).grad[0];
        K().axpy(val(a).numel(), 2.0 * g, val(a).data(), grad_of(a).data());
    };
    return id;
}

double Tape::scalar(int id) const {
    const Tensor& t = val(id);
    if (t.numel() != 1) throw UsageError("Tape::scalar: tensor is not scalar");
    return t[0];
}

void Tape::backward(int loss_id) {
    if (loss_id < 0 || loss_id >= static_cast<int>(entries_.size())) {
        throw UsageError("Tape::backward: invalid node id");
    }
    if (val(loss_id).numel() != 1) {
        throw UsageError("Tape::backward: loss must be scalar, got " + val(loss_id).shape_str());
    }
    entry(loss_id).grad.fill(1.0);
    for (int i = loss_id; i >= 0; --i) {
        if (entries_[static_cast<size_t>(i)].back) entries_[static_cast<size_t>(i)].back();
    }
}

}  // namespace hetpanel
