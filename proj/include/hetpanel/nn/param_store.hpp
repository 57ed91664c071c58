#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetpanel/core/tensor.hpp"

namespace hetpanel {

/// Ordered, named collection of learnable tensors plus their gradient
/// accumulators, and non-learnable buffers (batch-norm running statistics).
/// Registration order is the canonical parameter order used by the optimizer
/// and the checkpoint format.
class ParamStore {
public:
    int add(const std::string& name, Tensor init, bool decay_exempt = false);
    int add_buffer(const std::string& name, Tensor init);

    int find(const std::string& name) const;         // -1 if absent
    int find_buffer(const std::string& name) const;  // -1 if absent

    int count() const { return static_cast<int>(params_.size()); }
    int buffer_count() const { return static_cast<int>(buffers_.size()); }

    const std::string& name(int id) const { return params_.at(static_cast<size_t>(id)).name; }
    Tensor& value(int id) { return params_.at(static_cast<size_t>(id)).value; }
    const Tensor& value(int id) const { return params_.at(static_cast<size_t>(id)).value; }
    Tensor& grad(int id) { return params_.at(static_cast<size_t>(id)).grad; }
    bool decay_exempt(int id) const { return params_.at(static_cast<size_t>(id)).decay_exempt; }

    const std::string& buffer_name(int id) const {
        return buffers_.at(static_cast<size_t>(id)).name;
    }
    Tensor& buffer(int id) { return buffers_.at(static_cast<size_t>(id)).value; }
    const Tensor& buffer(int id) const { return buffers_.at(static_cast<size_t>(id)).value; }

    void zero_grads();
    std::int64_t total_scalars() const;

private:
    struct Param {
        std::string name;
        Tensor value;
        Tensor grad;
        bool decay_exempt = false;
    };
    struct Buffer {
        std::string name;
        Tensor value;
    };
    std::vector<Param> params_;
    std::vector<Buffer> buffers_;
};

}  // namespace hetpanel
