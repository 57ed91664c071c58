#include "hetpanel/nn/param_store.hpp"

#include "hetpanel/core/error.hpp"

namespace hetpanel {

int ParamStore::add(const std::string& name, Tensor init, bool decay_exempt) {
    if (find(name) >= 0) {
        throw UsageError("duplicate parameter name '" + name + "'");
    }
    Param p;
    p.name = name;
    p.grad = Tensor::zeros(init.shape());
    p.value = std::move(init);
    p.decay_exempt = decay_exempt;
    params_.push_back(std::move(p));
    return static_cast<int>(params_.size()) - 1;
}

int ParamStore::add_buffer(const std::string& name, Tensor init) {
    if (find_buffer(name) >= 0) {
        throw UsageError("duplicate buffer name '" + name + "'");
    }
    buffers_.push_back(Buffer{name, std::move(init)});
    return static_cast<int>(buffers_.size()) - 1;
}

int ParamStore::find(const std::string& name) const {
    for (size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int ParamStore::find_buffer(const std::string& name) const {
    for (size_t i = 0; i < buffers_.size(); ++i) {
        if (buffers_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

void ParamStore::zero_grads() {
    for (auto& p : params_) p.grad.fill(0.0);
}

std::int64_t ParamStore::total_scalars() const {
    std::int64_t n = 0;
    for (const auto& p : params_) n += p.value.numel();
    return n;
}

}  // namespace hetpanel
