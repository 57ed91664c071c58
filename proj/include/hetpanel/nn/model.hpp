#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetpanel/core/rng.hpp"
#include "hetpanel/graph/graph.hpp"
#include "hetpanel/nn/param_store.hpp"
#include "hetpanel/nn/tape.hpp"

namespace hetpanel {

enum class Activation { tanh_fn, relu_fn };
Activation activation_from_string(const std::string& s);
std::string activation_name(Activation a);

/// Global network hyperparameters (defaults give the full-scale training setup).
struct NetworkConfig {
    int layers = 6;
    int hidden = 64;
    int heads = 4;
    std::string activation = "tanh";
    double lr = 1e-3;
    int batch_size = 200;
    double l2 = 1e-5;

    void validate() const;
    int head_dim() const { return hidden / heads; }
};

/// Tape-side parameter handles for one HGT layer.
struct HgtLayerParamIds {
    std::vector<int> w_k, w_q, w_msg, w_a;   // per node type, each [d x d]
    std::vector<int> w_att, w_msg_edge, mu;  // per relation; [h x dh x dh] and scalar
};

/// Per-link attention weights for one destination node type in one layer.
struct AttentionRecord {
    int dst_type = -1;
    Tensor logits;                        // [L x heads], pre-softmax scores
    Tensor alpha;                         // [L x heads], rows follow link storage order
    std::vector<std::int32_t> target;     // node index within dst type, per row
    std::vector<std::int32_t> relation;   // catalog relation index, per row
};

/// One HGT message-passing layer (Eqs. 6-11).  `h_in` holds tape ids of the
/// per-type node states; param ids reference tensors registered in the
/// tape's ParamStore.  Returns per-type output ids.  Nodes without in-links
/// keep the residual path only.
std::vector<int> hgt_layer_forward(Tape& tape, const HeteroGraph& g, const std::vector<int>& h_in,
                                   const HgtLayerParamIds& ids, int heads, Activation act,
                                   int layer_index,
                                   std::vector<AttentionRecord>* attention = nullptr);

/// One GraphSAGE layer (Eqs. 4-5): h_v = act(W [h_v || mean_{u in N(v)} h_u]).
/// Operates on a single node type; isolated nodes aggregate a zero vector.
int sage_layer_forward(Tape& tape, const HeteroGraph& g, int h_in, int w, Activation act);

/// A full surrogate network: per-type input encoders, `layers` message-passing
/// blocks (each followed by batch norm and, for HGT, the activation), and an
/// affine readout head over geometry-node states producing one 10x20 field
/// per geometry node for a single scalar channel.
class Model {
public:
    enum class Kind { hgt, sage };

    Model(NetworkConfig cfg, RelationCatalog catalog, ParamStore& store, Rng& init_rng);

    /// Builds the forward pass on `tape`; returns the tape id of the
    /// [n_geometry x 200] prediction matrix.  In training mode batch norm uses
    /// batch statistics and updates its running buffers.
    int forward(Tape& tape, const HeteroGraph& g, bool training,
                std::vector<std::vector<AttentionRecord>>* attention = nullptr) const;

    /// Convenience wrapper: eval-mode forward, returns predictions by value.
    Tensor predict(const HeteroGraph& g) const;

    /// Per-link attention for one relation of one layer, [L_rel x heads],
    /// rows in link storage order (eval-mode forward).
    Tensor attention_scores(const HeteroGraph& g, int layer, int relation_index) const;

    const NetworkConfig& config() const { return cfg_; }
    const RelationCatalog& catalog() const { return catalog_; }
    Kind kind() const { return kind_; }
    ParamStore& store() const { return *store_; }
    int output_type() const { return output_type_; }

private:
    void register_params(Rng& rng);

    NetworkConfig cfg_;
    RelationCatalog catalog_;
    Kind kind_;
    ParamStore* store_;
    Activation act_;
    int output_type_ = 0;

    std::vector<int> enc_w_, enc_b_;  // per node type
    std::vector<int> null_;           // per node type, -1 when not applicable
    std::vector<HgtLayerParamIds> layers_;
    std::vector<int> sage_w_;                       // per layer (sage kind)
    std::vector<std::vector<int>> bn_gamma_, bn_beta_;  // [layer][type]
    std::vector<std::vector<int>> bn_mean_, bn_var_;    // buffer ids, [layer][type]
    int head_w_ = -1, head_b_ = -1;
};

/// Total learnable scalar count for a config/catalog combination.
std::int64_t count_parameters(const NetworkConfig& cfg, const RelationCatalog& catalog);

}  // namespace hetpanel
