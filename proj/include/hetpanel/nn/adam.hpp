#pragma once

#include <cstdint>
#include <vector>

#include "hetpanel/core/tensor.hpp"
#include "hetpanel/nn/param_store.hpp"

namespace hetpanel {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    // Decoupled L2 regularization; skipped for decay-exempt parameters
    // (norm scales/shifts and attention priors).
    double weight_decay = 0.0;
};

/// First/second-moment state for Adam, one pair of tensors per parameter in
/// registration order.
class AdamState {
public:
    explicit AdamState(const ParamStore& store);

    /// One optimizer step over every parameter using the accumulated
    /// gradients in `store`.  Gradients are left untouched.
    void step(ParamStore& store, const AdamConfig& cfg);

    std::int64_t step_count() const { return t_; }
    const Tensor& first_moment(int id) const { return m_.at(static_cast<size_t>(id)); }
    const Tensor& second_moment(int id) const { return v_.at(static_cast<size_t>(id)); }

    /// Replaces the moment tensors and step counter (checkpoint restore).
    /// Shapes must match the construction-time parameter shapes.
    void restore(std::vector<Tensor> m, std::vector<Tensor> v, std::int64_t t);

private:
    std::vector<Tensor> m_, v_;
    std::int64_t t_ = 0;
};

}  // namespace hetpanel
