#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hetpanel/core/tensor.hpp"
#include "hetpanel/nn/param_store.hpp"

namespace hetpanel {

/// Eager reverse-mode tape.  Every op records its output value together with a
/// backward closure; backward() walks the records in reverse creation order and
/// accumulates into parameter gradients held by the bound ParamStore.
///
/// All reductions run in storage order, so results are bitwise deterministic
/// for a fixed graph serialization.
class Tape {
public:
    explicit Tape(ParamStore* store = nullptr) : store_(store) {}

    // ---- leaves ----------------------------------------------------------
    int param(int param_id);      // learnable leaf (gradient flows to the store)
    int constant(Tensor value);   // non-learnable leaf

    // ---- dense ops -------------------------------------------------------
    int matmul(int a, int b);                 // [m x k] * [k x n]
    int add(int a, int b);                    // elementwise, same shape
    int add_row_broadcast(int a, int bias);   // bias is [n] or [1 x n]
    int mul_const(int a, double c);
    int tanh_act(int a);
    int relu_act(int a);

    // ---- structural ops --------------------------------------------------
    int gather_rows(int a, std::vector<std::int32_t> idx);
    // out has n_out rows; out[idx[l]] += a[l] in storage order of l.
    int scatter_add_rows(int a, std::vector<std::int32_t> idx, std::int64_t n_out);
    int concat_rows(const std::vector<int>& parts);
    int concat_cols(int a, int b);
    // Rows with mask == 0 are replaced by the (learnable) single-row tensor.
    int replace_masked_rows(int a, std::vector<std::uint8_t> mask, int null_row);
    // Each row i scaled by factors[i] (constant).
    int scale_rows_const(int a, std::vector<double> factors);

    // ---- multi-head ops (row layout [L x h*dh], W stored [h x dh x dh]) --
    int head_matmul(int x, int w, int heads, int dh);
    int head_rowdot(int a, int b, int heads, int dh);    // -> [L x h]
    int head_scale(int m, int s, int heads, int dh);     // m [L x h*dh], s [L x h]
    // y = x * (p[0] * factor) where p is a scalar parameter tensor.
    int scale_by_scalar_param(int x, int p, double factor);

    // Softmax over rows sharing a segment id, independently per column.
    // seg[l] in [0, n_seg); rows of a segment need not be contiguous.
    int segment_softmax(int logits, std::vector<std::int32_t> seg, std::int64_t n_seg);

    // ---- normalization ---------------------------------------------------
    // Per-column batch norm over all rows.  In training mode the batch
    // statistics are used and the running buffers (owned by the caller) are
    // updated in place; in eval mode the op is a fixed affine map built from
    // the running buffers.
    int batch_norm(int x, int gamma, int beta, Tensor* running_mean, Tensor* running_var,
                   bool training, double momentum = 0.1, double eps = 1e-5);

    // ---- losses / scalars ------------------------------------------------
    int rmse_loss(int pred, Tensor target);  // scalar [1]
    int sum_squares(int a);                  // scalar [1]

    // ---- access ----------------------------------------------------------
    const Tensor& val(int id) const { return entries_.at(static_cast<size_t>(id)).val; }
    Tensor& grad_of(int id) { return entries_.at(static_cast<size_t>(id)).grad; }
    double scalar(int id) const;
    std::int64_t size() const { return static_cast<std::int64_t>(entries_.size()); }

    /// Seeds d(loss)/d(loss) = 1, walks the tape backwards, then adds leaf
    /// gradients into the bound ParamStore.
    void backward(int loss_id);

private:
    struct Entry {
        Tensor val;
        Tensor grad;
        std::function<void()> back;  // empty for leaves
        int param_id = -1;
    };

    int push(Tensor value, std::function<void()> back = {}, int param_id = -1);
    Entry& entry(int id) { return entries_.at(static_cast<size_t>(id)); }

    ParamStore* store_ = nullptr;
    std::vector<Entry> entries_;
};

}  // namespace hetpanel
