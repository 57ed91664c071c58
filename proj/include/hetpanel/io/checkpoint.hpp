#pragma once

#include <string>

#include "hetpanel/graph/catalog.hpp"
#include "hetpanel/nn/adam.hpp"
#include "hetpanel/nn/model.hpp"
#include "hetpanel/nn/param_store.hpp"
#include "hetpanel/panel/field_grid.hpp"

namespace hetpanel {

/// What a checkpoint claims about the network it stores.
struct CheckpointMeta {
    NetworkConfig config;
    Variant variant = Variant::d;
    Channel channel = Channel::stress;
};

struct CheckpointInfo {
    CheckpointMeta meta;
    bool has_optimizer = false;
    std::int64_t optimizer_step = 0;
};

/// Writes an HPCK checkpoint: config + catalog echo, named 64-bit parameter
/// blocks, batch-norm buffers, and (optionally) Adam moments.  Atomic.
void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const RelationCatalog& catalog, const ParamStore& store,
                     const AdamState* optimizer = nullptr);

/// Loads an HPCK checkpoint into `store` (which must hold the same named
/// parameters, i.e. come from a Model built with the matching config and
/// catalog).  Architecture mismatches (layers/hidden/heads/activation/
/// variant/channel, catalog shape, parameter keys) are rejected with a
/// named-key diff; nothing is coerced.  If `optimizer` is non-null and the
/// file carries moments, they are restored; a checkpoint without optimizer
/// state loads fine and leaves `optimizer` untouched.
CheckpointInfo load_checkpoint(const std::string& path, const CheckpointMeta& expected,
                               const RelationCatalog& expected_catalog, ParamStore& store,
                               AdamState* optimizer = nullptr);

/// Reads just the header (meta + optimizer presence) without loading tensors.
CheckpointInfo peek_checkpoint(const std::string& path);

}  // namespace hetpanel
