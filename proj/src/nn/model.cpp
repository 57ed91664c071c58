#include "hetpanel/nn/model.hpp"

#include <cmath>

#include "hetpanel/core/error.hpp"
#include "hetpanel/panel/field_grid.hpp"

namespace hetpanel {

namespace {

constexpr std::int64_t kOutputWidth =
    static_cast<std::int64_t>(FieldGrid::kRows) * FieldGrid::kCols;

Tensor glorot(std::vector<std::int64_t> shape, std::int64_t fan_in, std::int64_t fan_out,
              Rng& rng) {
    Tensor t(std::move(shape));
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(-limit, limit);
    return t;
}

int apply_act(Tape& tape, int x, Activation act) {
    return act == Activation::tanh_fn ? tape.tanh_act(x) : tape.relu_act(x);
}

}  // namespace

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::tanh_fn;
    if (s == "relu") return Activation::relu_fn;
    throw ConfigError("unknown activation '" + s + "' (expected tanh or relu)");
}

std::string activation_name(Activation a) {
    return a == Activation::tanh_fn ? "tanh" : "relu";
}

void NetworkConfig::validate() const {
    if (layers < 1) throw ConfigError("layers must be at least 1");
    if (hidden < 1) throw ConfigError("hidden must be at least 1");
    if (heads < 1) throw ConfigError("heads must be at least 1");
    if (hidden % heads != 0) {
        throw ConfigError("hidden (" + std::to_string(hidden) + ") must be divisible by heads (" +
                          std::to_string(heads) + ")");
    }
    if (!(lr >= 0.0)) throw ConfigError("lr must be non-negative");
    if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
    if (l2 < 0.0) throw ConfigError("l2 must be non-negative");
    activation_from_string(activation);
}

std::vector<int> hgt_layer_forward(Tape& tape, const HeteroGraph& g, const std::vector<int>& h_in,
                                   const HgtLayerParamIds& ids, int heads, Activation act,
                                   int layer_index, std::vector<AttentionRecord>* attention) {
    const RelationCatalog& cat = g.catalog;
    const int n_types = static_cast<int>(cat.node_types.size());
    if (static_cast<int>(h_in.size()) != n_types) {
        throw UsageError("hgt_layer_forward: state count does not match node type count");
    }
    const std::int64_t d = tape.val(h_in[0]).cols();
    if (d % heads != 0) throw UsageError("hgt_layer_forward: width not divisible by heads");
    const int dh = static_cast<int>(d) / heads;
    const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));

    // Per-type key / query / message projections (Eqs. 8 and 10).
    std::vector<int> K(static_cast<size_t>(n_types)), Q(static_cast<size_t>(n_types)),
        M(static_cast<size_t>(n_types));
    for (int t = 0; t < n_types; ++t) {
        K[static_cast<size_t>(t)] = tape.matmul(h_in[static_cast<size_t>(t)], tape.param(ids.w_k[static_cast<size_t>(t)]));
        Q[static_cast<size_t>(t)] = tape.matmul(h_in[static_cast<size_t>(t)], tape.param(ids.w_q[static_cast<size_t>(t)]));
        M[static_cast<size_t>(t)] = tape.matmul(h_in[static_cast<size_t>(t)], tape.param(ids.w_msg[static_cast<size_t>(t)]));
    }

    // Per-relation attention logits and transformed messages, grouped by
    // destination type so the softmax normalizes across every in-link of a
    // target node regardless of relation.
    struct Part {
        int logit;
        int msg;
        const LinkList* links;
        int relation;
    };
    std::vector<std::vector<Part>> parts(static_cast<size_t>(n_types));
    for (size_t r = 0; r < cat.relations.size(); ++r) {
        const LinkList& ll = g.links[r];
        if (ll.src.empty()) continue;
        const RelationInfo& rel = cat.relations[r];
        const int ksel = tape.gather_rows(K[static_cast<size_t>(rel.src_type)], ll.src);
        const int ka = tape.head_matmul(ksel, tape.param(ids.w_att[r]), heads, dh);
        const int q = tape.gather_rows(Q[static_cast<size_t>(rel.dst_type)], ll.dst);
        const int raw = tape.head_rowdot(ka, q, heads, dh);
        const int logit = tape.scale_by_scalar_param(raw, tape.param(ids.mu[r]), inv_sqrt_dh);
        if (!tape.val(logit).all_finite()) {
            throw NumericError("non-finite attention logits in layer " +
                               std::to_string(layer_index) + ", relation '" + rel.name + "'");
        }
        const int msel = tape.gather_rows(M[static_cast<size_t>(rel.src_type)], ll.src);
        const int msg = tape.head_matmul(msel, tape.param(ids.w_msg_edge[r]), heads, dh);
        parts[static_cast<size_t>(rel.dst_type)].push_back(
            Part{logit, msg, &ll, static_cast<int>(r)});
    }

    std::vector<int> out(static_cast<size_t>(n_types));
    for (int t = 0; t < n_types; ++t) {
        const auto& pt = parts[static_cast<size_t>(t)];
        if (pt.empty()) {
            out[static_cast<size_t>(t)] = h_in[static_cast<size_t>(t)];
            continue;
        }
        std::vector<int> logit_parts, msg_parts;
        std::vector<std::int32_t> seg, rel_row;
        for (const Part& p : pt) {
            logit_parts.push_back(p.logit);
            msg_parts.push_back(p.msg);
            seg.insert(seg.end(), p.links->dst.begin(), p.links->dst.end());
            rel_row.insert(rel_row.end(), p.links->dst.size(),
                           static_cast<std::int32_t>(p.relation));
        }
        const int logits =
            logit_parts.size() == 1 ? logit_parts[0] : tape.concat_rows(logit_parts);
        const int msgs = msg_parts.size() == 1 ? msg_parts[0] : tape.concat_rows(msg_parts);
        const std::int64_t n_t = g.n_nodes(t);
        const int alpha = tape.segment_softmax(logits, seg, n_t);
        if (attention != nullptr) {
            AttentionRecord rec;
            rec.dst_type = t;
            rec.logits = tape.val(logits);
            rec.alpha = tape.val(alpha);
            rec.target = seg;
            rec.relation = rel_row;
            attention->push_back(std::move(rec));
        }
        const int weighted = tape.head_scale(msgs, alpha, heads, dh);
        const int agg = tape.scatter_add_rows(weighted, seg, n_t);
        const int sig = apply_act(tape, agg, act);
        const int upd = tape.matmul(sig, tape.param(ids.w_a[static_cast<size_t>(t)]));
        out[static_cast<size_t>(t)] = tape.add(upd, h_in[static_cast<size_t>(t)]);
        if (!tape.val(out[static_cast<size_t>(t)]).all_finite()) {
            throw NumericError("non-finite activations in layer " + std::to_string(layer_index) +
                               ", node type '" + cat.node_types[static_cast<size_t>(t)].name +
                               "'");
        }
    }
    return out;
}

int sage_layer_forward(Tape& tape, const HeteroGraph& g, int h_in, int w, Activation act) {
    if (g.catalog.node_types.size() != 1 || g.links.size() != 1) {
        throw UsageError("sage_layer_forward: expected a homogeneous graph");
    }
    const LinkList& ll = g.links[0];
    const std::int64_t n = g.n_nodes(0);
    const std::int64_t d = tape.val(h_in).cols();
    int m;
    if (ll.src.empty()) {
        m = tape.constant(Tensor::zeros({n, d}));
    } else {
        std::vector<double> inv_deg(static_cast<size_t>(n), 0.0);
        for (const auto dst : ll.dst) inv_deg[static_cast<size_t>(dst)] += 1.0;
        for (auto& v : inv_deg) v = v > 0.0 ? 1.0 / v : 0.0;
        const int gathered = tape.gather_rows(h_in, ll.src);
        const int summed = tape.scatter_add_rows(gathered, ll.dst, n);
        m = tape.scale_rows_const(summed, std::move(inv_deg));
    }
    const int cc = tape.concat_cols(h_in, m);
    return apply_act(tape, tape.matmul(cc, w), act);
}

Model::Model(NetworkConfig cfg, RelationCatalog catalog, ParamStore& store, Rng& init_rng)
    : cfg_(std::move(cfg)), catalog_(std::move(catalog)), store_(&store) {
    cfg_.validate();
    act_ = activation_from_string(cfg_.activation);
    kind_ = catalog_.variant == Variant::homogeneous ? Kind::sage : Kind::hgt;
    output_type_ = catalog_.node_type_index(kind_ == Kind::hgt ? "geometry" : "unit");
    register_params(init_rng);
}

void Model::register_params(Rng& rng) {
    const int d = cfg_.hidden;
    const int h = cfg_.heads;
    const int dh = cfg_.head_dim();
    const int n_types = static_cast<int>(catalog_.node_types.size());

    for (int t = 0; t < n_types; ++t) {
        const auto& info = catalog_.node_types[static_cast<size_t>(t)];
        const std::int64_t raw = info.feature_width;
        enc_w_.push_back(store_->add("enc." + info.name + ".weight",
                                     glorot({raw, d}, raw, d, rng)));
        enc_b_.push_back(store_->add("enc." + info.name + ".bias", Tensor::zeros({d})));
        // Boundary types can carry unknown rows; they get a learned null
        // embedding in the encoded space, initialized to zero.
        if (info.name.rfind("boundary", 0) == 0) {
            null_.push_back(store_->add("null." + info.name, Tensor::zeros({d})));
        } else {
            null_.push_back(-1);
        }
    }

    bn_gamma_.assign(static_cast<size_t>(cfg_.layers), {});
    bn_beta_.assign(static_cast<size_t>(cfg_.layers), {});
    bn_mean_.assign(static_cast<size_t>(cfg_.layers), {});
    bn_var_.assign(static_cast<size_t>(cfg_.layers), {});

    for (int l = 0; l < cfg_.layers; ++l) {
        const std::string lp = "layer" + std::to_string(l) + ".";
        if (kind_ == Kind::hgt) {
            HgtLayerParamIds ids;
            for (int t = 0; t < n_types; ++t) {
                const std::string& tn = catalog_.node_types[static_cast<size_t>(t)].name;
                ids.w_k.push_back(store_->add(lp + tn + ".w_k", glorot({d, d}, d, d, rng)));
                ids.w_q.push_back(store_->add(lp + tn + ".w_q", glorot({d, d}, d, d, rng)));
                ids.w_msg.push_back(store_->add(lp + tn + ".w_msg", glorot({d, d}, d, d, rng)));
                ids.w_a.push_back(store_->add(lp + tn + ".w_a", glorot({d, d}, d, d, rng)));
            }
            for (const auto& rel : catalog_.relations) {
                ids.w_att.push_back(
                    store_->add(lp + rel.name + ".w_att", glorot({h, dh, dh}, dh, dh, rng)));
                ids.w_msg_edge.push_back(
                    store_->add(lp + rel.name + ".w_msg_edge", glorot({h, dh, dh}, dh, dh, rng)));
                ids.mu.push_back(store_->add(lp + rel.name + ".mu", Tensor::full({1}, 1.0),
                                             /*decay_exempt=*/true));
            }
            layers_.push_back(std::move(ids));
        } else {
            sage_w_.push_back(
                store_->add(lp + "sage.weight", glorot({2 * d, d}, 2 * d, d, rng)));
        }
        for (int t = 0; t < n_types; ++t) {
            const std::string& tn = catalog_.node_types[static_cast<size_t>(t)].name;
            bn_gamma_[static_cast<size_t>(l)].push_back(
                store_->add(lp + tn + ".bn_gamma", Tensor::full({d}, 1.0), /*decay_exempt=*/true));
            bn_beta_[static_cast<size_t>(l)].push_back(
                store_->add(lp + tn + ".bn_beta", Tensor::zeros({d}), /*decay_exempt=*/true));
            bn_mean_[static_cast<size_t>(l)].push_back(
                store_->add_buffer(lp + tn + ".bn_mean", Tensor::zeros({d})));
            bn_var_[static_cast<size_t>(l)].push_back(
                store_->add_buffer(lp + tn + ".bn_var", Tensor::full({d}, 1.0)));
        }
    }

    head_w_ = store_->add("head.weight", glorot({d, kOutputWidth}, d, kOutputWidth, rng));
    head_b_ = store_->add("head.bias", Tensor::zeros({kOutputWidth}));
}

int Model::forward(Tape& tape, const HeteroGraph& g, bool training,
                   std::vector<std::vector<AttentionRecord>>* attention) const {
    if (g.catalog.variant != catalog_.variant ||
        g.catalog.node_types.size() != catalog_.node_types.size() ||
        g.catalog.relations.size() != catalog_.relations.size()) {
        throw UsageError("graph catalog does not match the model catalog (variant " +
                         variant_name(g.catalog.variant) + " vs " +
                         variant_name(catalog_.variant) + ")");
    }
    const int n_types = static_cast<int>(catalog_.node_types.size());
    if (attention != nullptr) attention->assign(static_cast<size_t>(cfg_.layers), {});

    std::vector<int> h(static_cast<size_t>(n_types));
    for (int t = 0; t < n_types; ++t) {
        const size_t ts = static_cast<size_t>(t);
        const int raw = tape.constant(g.features[ts]);
        int enc = tape.add_row_broadcast(tape.matmul(raw, tape.param(enc_w_[ts])),
                                         tape.param(enc_b_[ts]));
        if (null_[ts] >= 0 && !g.known_mask[ts].empty()) {
            enc = tape.replace_masked_rows(enc, g.known_mask[ts], tape.param(null_[ts]));
        }
        h[ts] = enc;
    }

    for (int l = 0; l < cfg_.layers; ++l) {
        const size_t ls = static_cast<size_t>(l);
        if (kind_ == Kind::hgt) {
            h = hgt_layer_forward(tape, g, h, layers_[ls], cfg_.heads, act_, l,
                                  attention != nullptr ? &(*attention)[ls] : nullptr);
        } else {
            h[0] = sage_layer_forward(tape, g, h[0], tape.param(sage_w_[ls]), act_);
        }
        for (int t = 0; t < n_types; ++t) {
            const size_t ts = static_cast<size_t>(t);
            if (g.n_nodes(t) == 0) continue;
            h[ts] = tape.batch_norm(h[ts], tape.param(bn_gamma_[ls][ts]),
                                    tape.param(bn_beta_[ls][ts]),
                                    &store_->buffer(bn_mean_[ls][ts]),
                                    &store_->buffer(bn_var_[ls][ts]), training);
            if (kind_ == Kind::hgt) h[ts] = apply_act(tape, h[ts], act_);
        }
    }

    const size_t os = static_cast<size_t>(output_type_);
    const int pred = tape.add_row_broadcast(tape.matmul(h[os], tape.param(head_w_)),
                                            tape.param(head_b_));
    if (!tape.val(pred).all_finite()) {
        throw NumericError("non-finite values at the output head");
    }
    return pred;
}

Tensor Model::predict(const HeteroGraph& g) const {
    Tape tape(store_);
    const int pred = forward(tape, g, /*training=*/false);
    return tape.val(pred);
}

Tensor Model::attention_scores(const HeteroGraph& g, int layer, int relation_index) const {
    if (kind_ != Kind::hgt) throw UsageError("attention_scores: model has no attention");
    if (layer < 0 || layer >= cfg_.layers) throw UsageError("attention_scores: layer out of range");
    if (relation_index < 0 || relation_index >= static_cast<int>(catalog_.relations.size())) {
        throw UsageError("attention_scores: relation index out of range");
    }
    std::vector<std::vector<AttentionRecord>> records;
    Tape tape(store_);
    forward(tape, g, /*training=*/false, &records);
    const std::int64_t n_links =
        static_cast<std::int64_t>(g.links[static_cast<size_t>(relation_index)].src.size());
    Tensor out({n_links, cfg_.heads});
    std::int64_t next = 0;
    for (const AttentionRecord& rec : records[static_cast<size_t>(layer)]) {
        for (size_t row = 0; row < rec.relation.size(); ++row) {
            if (rec.relation[row] != relation_index) continue;
            for (int c = 0; c < cfg_.heads; ++c) {
                out.at(next, c) = rec.alpha.at(static_cast<std::int64_t>(row), c);
            }
            ++next;
        }
    }
    if (next != n_links) {
        throw UsageError("attention_scores: link rows missing from the forward records");
    }
    return out;
}

std::int64_t count_parameters(const NetworkConfig& cfg, const RelationCatalog& catalog) {
    ParamStore scratch;
    Rng rng(0);
    Model model(cfg, catalog, scratch, rng);
    return scratch.total_scalars();
}

}  // namespace hetpanel
