#include "hetpanel/nn/adam.hpp"

#include <cmath>

#include "hetpanel/core/error.hpp"
#include "hetpanel/kernels/kernels.hpp"

namespace hetpanel {

AdamState::AdamState(const ParamStore& store) {
    m_.reserve(static_cast<size_t>(store.count()));
    v_.reserve(static_cast<size_t>(store.count()));
    for (int i = 0; i < store.count(); ++i) {
        m_.push_back(Tensor::zeros(store.value(i).shape()));
        v_.push_back(Tensor::zeros(store.value(i).shape()));
    }
}

void AdamState::restore(std::vector<Tensor> m, std::vector<Tensor> v, std::int64_t t) {
    if (m.size() != m_.size() || v.size() != v_.size() || t < 0) {
        throw UsageError("AdamState::restore: moment count or step mismatch");
    }
    for (size_t i = 0; i < m.size(); ++i) {
        if (!m[i].same_shape(m_[i]) || !v[i].same_shape(v_[i])) {
            throw UsageError("AdamState::restore: moment shape mismatch at index " +
                             std::to_string(i));
        }
    }
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

void AdamState::step(ParamStore& store, const AdamConfig& cfg) {
    if (static_cast<int>(m_.size()) != store.count()) {
        throw UsageError("AdamState: parameter count changed since construction");
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t_));
    const auto& ops = kernels::ops();
    for (int i = 0; i < store.count(); ++i) {
        const size_t is = static_cast<size_t>(i);
        Tensor& p = store.value(i);
        const Tensor& g = store.grad(i);
        if (!g.all_finite()) {
            throw NumericError("non-finite gradient for parameter '" + store.name(i) + "'");
        }
        const double wd = store.decay_exempt(i) ? 0.0 : cfg.weight_decay;
        ops.adam_update(p.numel(), p.data(), g.data(), m_[is].data(), v_[is].data(), cfg.beta1,
                        cfg.beta2, bc1, bc2, cfg.lr, cfg.eps, wd);
        if (!p.all_finite()) {
            throw NumericError("non-finite parameter after update: '" + store.name(i) + "'");
        }
    }
}

}  // namespace hetpanel
