#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"
#include "hetpanel/graph/graph.hpp"
#include "hetpanel/nn/adam.hpp"
#include "hetpanel/nn/model.hpp"
#include "hetpanel/nn/param_store.hpp"
#include "hetpanel/nn/tape.hpp"
#include "hetpanel/oracle/grillage.hpp"

using namespace hetpanel;

namespace {

PanelCase small_case(int n_stiffeners, std::uint64_t seed) {
    GeometryRanges ranges;
    ranges.n_stiffeners_min = n_stiffeners;
    ranges.n_stiffeners_max = n_stiffeners;
    Rng rng(seed);
    const PanelGeometry geom = sample_panel(ranges, rng);
    return synthesize_case(geom, MaterialLaw{}, CaseGenConfig{}, rng);
}

Tensor random_target(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Tensor t({rows, cols});
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = rng.normal();
    return t;
}

/// Hand-built two-source / one-target graph used by the frozen layer trace.
struct ToyFixture {
    RelationCatalog cat;
    HeteroGraph g;
    ParamStore store;
    HgtLayerParamIds ids;

    ToyFixture() {
        cat.variant = Variant::e;
        cat.node_types = {{"src", 2}, {"dst", 2}};
        cat.relations.push_back({"src__rel__dst", 0, 1, -1, false});
        g.catalog = cat;
        g.features = {Tensor::from_values({2, 2}, {0.3, -0.7, -0.2, 0.5}),
                      Tensor::from_values({1, 2}, {0.6, 0.1})};
        g.known_mask = {{}, {}};
        LinkList ll;
        ll.add(0, 0);
        ll.add(1, 0);
        g.links = {ll};
        g.case_unit_counts = {1};

        const auto m22 = [](std::vector<double> v) {
            return Tensor::from_values({2, 2}, std::move(v));
        };
        ids.w_k = {store.add("wk.src", m22({1.0, 0.5, -0.3, 0.2})),
                   store.add("wk.dst", Tensor::zeros({2, 2}))};
        ids.w_q = {store.add("wq.src", Tensor::zeros({2, 2})),
                   store.add("wq.dst", m22({0.7, -0.1, 0.4, 0.9}))};
        ids.w_msg = {store.add("wmsg.src", m22({0.2, 0.8, -0.5, 0.4})),
                     store.add("wmsg.dst", Tensor::zeros({2, 2}))};
        ids.w_a = {store.add("wa.src", Tensor::zeros({2, 2})),
                   store.add("wa.dst", m22({0.9, 0.1, -0.2, 0.5}))};
        ids.w_att = {store.add("rel.w_att",
                               Tensor::from_values({1, 2, 2}, {0.6, -0.2, 0.1, 0.3}))};
        ids.w_msg_edge = {store.add("rel.w_msg_edge",
                                    Tensor::from_values({1, 2, 2}, {1.1, -0.6, 0.25, 0.35}))};
        ids.mu = {store.add("rel.mu", Tensor::full({1}, 1.3))};
    }
};

double model_loss(const Model& model, const HeteroGraph& g, const Tensor& target) {
    Tape tape(&model.store());
    const int pred = model.forward(tape, g, /*training=*/true);
    return tape.scalar(tape.rmse_loss(pred, target));
}

/// Central-difference check of d(loss)/d(param) on `probes` randomly chosen
/// parameter scalars.
void check_model_gradients(const Model& model, const HeteroGraph& g, const Tensor& target,
                           std::uint64_t seed, int probes) {
    ParamStore& store = model.store();
    store.zero_grads();
    Tape tape(&store);
    const int pred = model.forward(tape, g, /*training=*/true);
    const int loss = tape.rmse_loss(pred, target);
    tape.backward(loss);

    Rng rng(seed);
    const double step = 1e-5;
    int worst_shown = 0;
    for (int p = 0; p < probes; ++p) {
        const int pid = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(store.count())));
        const std::int64_t k = static_cast<std::int64_t>(
            rng.uniform_index(static_cast<std::uint64_t>(store.value(pid).numel())));
        const double saved = store.value(pid)[k];
        store.value(pid)[k] = saved + step;
        const double lp = model_loss(model, g, target);
        store.value(pid)[k] = saved - step;
        const double lm = model_loss(model, g, target);
        store.value(pid)[k] = saved;
        const double fd = (lp - lm) / (2.0 * step);
        const double an = store.grad(pid)[k];
        const double tol = std::max(1e-7, 1e-4 * std::max(std::abs(fd), std::abs(an)));
        const bool ok = std::abs(fd - an) <= tol;
        if (!ok && worst_shown++ < 5) {
            CAPTURE(store.name(pid));
            CAPTURE(k);
            CAPTURE(fd);
            CAPTURE(an);
        }
        CHECK(ok);
    }
}

}  // namespace

TEST_CASE("hgt layer reproduces the frozen two-link trace") {
    ToyFixture fx;
    Tape tape(&fx.store);
    const std::vector<int> h_in = {tape.constant(fx.g.features[0]),
                                   tape.constant(fx.g.features[1])};
    std::vector<AttentionRecord> records;
    const std::vector<int> out =
        hgt_layer_forward(tape, fx.g, h_in, fx.ids, /*heads=*/1, Activation::tanh_fn, 0, &records);

    REQUIRE(records.size() == 1);
    const AttentionRecord& rec = records[0];
    REQUIRE(rec.alpha.rows() == 2);
    REQUIRE(rec.alpha.cols() == 1);
    // Frozen reference values for this parameter set (computed by hand from
    // Eqs. 8-11 before the layer was implemented).
    CHECK(std::abs(rec.logits[0] - 0.12708476624875223) < 1e-12);
    CHECK(std::abs(rec.logits[1] - (-0.08686806806876735)) < 1e-12);
    CHECK(std::abs(rec.alpha[0] - 0.553285099414391) < 1e-12);
    CHECK(std::abs(rec.alpha[1] - 0.4467149005856091) < 1e-12);
    CHECK(rec.target == std::vector<std::int32_t>{0, 0});
    CHECK(rec.relation == std::vector<std::int32_t>{0, 0});

    // Source type receives no links: its state must pass through untouched.
    const Tensor& src_out = tape.val(out[0]);
    CHECK(src_out.at(0, 0) == 0.3);
    CHECK(src_out.at(1, 1) == 0.5);

    const Tensor& dst_out = tape.val(out[1]);
    CHECK(std::abs(dst_out.at(0, 0) - 0.70697216) < 1e-7);
    CHECK(std::abs(dst_out.at(0, 1) - 0.08065676) < 1e-7);

    // With W^A = I the update h_out - h_in equals sigma(m_tilde) directly,
    // pinning the aggregated message against its frozen value.
    fx.store.value(fx.ids.w_a[1]) = Tensor::from_values({2, 2}, {1.0, 0.0, 0.0, 1.0});
    Tape tape2(&fx.store);
    const std::vector<int> h_in2 = {tape2.constant(fx.g.features[0]),
                                    tape2.constant(fx.g.features[1])};
    const std::vector<int> out2 =
        hgt_layer_forward(tape2, fx.g, h_in2, fx.ids, 1, Activation::tanh_fn, 0);
    const Tensor& d2 = tape2.val(out2[1]);
    CHECK(std::abs((d2.at(0, 0) - 0.6) - std::tanh(0.10596382)) < 1e-7);
    CHECK(std::abs((d2.at(0, 1) - 0.1) - std::tanh(-0.05987172)) < 1e-7);
}

TEST_CASE("hgt layer with zero message parameters is the identity map") {
    ToyFixture fx;
    fx.store.value(fx.ids.w_msg[0]).fill(0.0);
    fx.store.value(fx.ids.w_msg[1]).fill(0.0);
    Tape tape(&fx.store);
    const std::vector<int> h_in = {tape.constant(fx.g.features[0]),
                                   tape.constant(fx.g.features[1])};
    const std::vector<int> out =
        hgt_layer_forward(tape, fx.g, h_in, fx.ids, 1, Activation::tanh_fn, 0);
    for (int t = 0; t < 2; ++t) {
        const Tensor& a = tape.val(h_in[static_cast<size_t>(t)]);
        const Tensor& b = tape.val(out[static_cast<size_t>(t)]);
        REQUIRE(a.same_shape(b));
        for (std::int64_t i = 0; i < a.numel(); ++i) CHECK(b[i] == a[i]);
    }
}

TEST_CASE("hgt layer gradients agree with finite differences on the toy graph") {
    ToyFixture fx;
    fx.store.zero_grads();
    const auto run = [&]() {
        Tape tape(&fx.store);
        const std::vector<int> h_in = {tape.constant(fx.g.features[0]),
                                       tape.constant(fx.g.features[1])};
        const std::vector<int> out =
            hgt_layer_forward(tape, fx.g, h_in, fx.ids, 1, Activation::tanh_fn, 0);
        return tape.scalar(tape.sum_squares(tape.concat_rows({out[0], out[1]})));
    };

    // Analytic gradients.
    {
        Tape tape(&fx.store);
        const std::vector<int> h_in = {tape.constant(fx.g.features[0]),
                                       tape.constant(fx.g.features[1])};
        const std::vector<int> out =
            hgt_layer_forward(tape, fx.g, h_in, fx.ids, 1, Activation::tanh_fn, 0);
        const int all = tape.concat_rows({out[0], out[1]});
        tape.backward(tape.sum_squares(all));
    }

    const double step = 1e-5;
    for (int pid = 0; pid < fx.store.count(); ++pid) {
        for (std::int64_t k = 0; k < fx.store.value(pid).numel(); ++k) {
            const double saved = fx.store.value(pid)[k];
            fx.store.value(pid)[k] = saved + step;
            const double lp = run();
            fx.store.value(pid)[k] = saved - step;
            const double lm = run();
            fx.store.value(pid)[k] = saved;
            const double fd = (lp - lm) / (2.0 * step);
            const double an = fx.store.grad(pid)[k];
            CAPTURE(fx.store.name(pid));
            CAPTURE(k);
            CHECK(std::abs(fd - an) <= std::max(1e-7, 1e-4 * std::max(std::abs(fd), std::abs(an))));
        }
    }
}

TEST_CASE("sage layer reproduces the frozen trace and zero-fills isolated nodes") {
    RelationCatalog cat;
    cat.variant = Variant::homogeneous;
    cat.node_types = {{"unit", 2}};
    cat.relations.push_back({"unit__adjacent__unit", 0, 0, -1, false});

    HeteroGraph g;
    g.catalog = cat;
    g.features = {Tensor::from_values({3, 2}, {0.4, -0.1, -0.3, 0.8, 0.25, -0.6})};
    g.known_mask = {{}};
    LinkList ll;
    ll.add(0, 1);
    ll.add(1, 0);
    g.links = {ll};
    g.case_unit_counts = {3};

    ParamStore store;
    const int w = store.add(
        "sage.w", Tensor::from_values({4, 2}, {0.3, -0.4, 0.8, 0.1, -0.2, 0.6, 0.5, 0.9}));
    Tape tape(&store);
    const int h = tape.constant(g.features[0]);
    const int out = sage_layer_forward(tape, g, h, tape.param(w), Activation::tanh_fn);
    const Tensor& o = tape.val(out);

    CHECK(std::abs(o.at(0, 0) - 0.46211716) < 1e-7);
    CHECK(std::abs(o.at(0, 1) - 0.35399171) < 1e-7);
    CHECK(std::abs(o.at(1, 0) - 0.39693043) < 1e-7);
    CHECK(std::abs(o.at(1, 1) - 0.33637554) < 1e-7);

    // Node 2 has no neighbours: its aggregate is the zero vector, so the
    // output only sees [h_2 || 0].
    const double e0 = std::tanh(0.25 * 0.3 + (-0.6) * 0.8);
    const double e1 = std::tanh(0.25 * (-0.4) + (-0.6) * 0.1);
    CHECK(std::abs(o.at(2, 0) - e0) < 1e-12);
    CHECK(std::abs(o.at(2, 1) - e1) < 1e-12);
}

TEST_CASE("attention normalizes to one over all in-links of each target") {
    const PanelCase pc = small_case(2, 901);
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;

    for (const Variant v : {Variant::a, Variant::b, Variant::c, Variant::d, Variant::e,
                            Variant::f}) {
        CAPTURE(variant_name(v));
        const HeteroGraph g = build_variant(pc, v);
        ParamStore store;
        Rng rng(7);
        const Model model(cfg, relation_catalog(VariantSpec::for_variant(v)), store, rng);
        std::vector<std::vector<AttentionRecord>> records;
        Tape tape(&store);
        model.forward(tape, g, /*training=*/false, &records);
        REQUIRE(records.size() == 2);
        for (const auto& layer : records) {
            for (const AttentionRecord& rec : layer) {
                // alpha sums per (target, head).
                std::map<std::int32_t, std::vector<double>> sums;
                for (std::int64_t r = 0; r < rec.alpha.rows(); ++r) {
                    auto& acc = sums[rec.target[static_cast<size_t>(r)]];
                    acc.resize(static_cast<size_t>(rec.alpha.cols()), 0.0);
                    for (std::int64_t c = 0; c < rec.alpha.cols(); ++c) {
                        acc[static_cast<size_t>(c)] += rec.alpha.at(r, c);
                    }
                }
                for (const auto& [target, acc] : sums) {
                    for (const double s : acc) CHECK(std::abs(s - 1.0) < 1e-6);
                }
            }
        }
    }
}

TEST_CASE("single in-link gets attention weight exactly one") {
    ToyFixture fx;
    // Drop the second link so the softmax runs over a singleton segment.
    fx.g.links[0].src.pop_back();
    fx.g.links[0].dst.pop_back();
    Tape tape(&fx.store);
    const std::vector<int> h_in = {tape.constant(fx.g.features[0]),
                                   tape.constant(fx.g.features[1])};
    std::vector<AttentionRecord> records;
    hgt_layer_forward(tape, fx.g, h_in, fx.ids, 1, Activation::tanh_fn, 0, &records);
    REQUIRE(records.size() == 1);
    REQUIRE(records[0].alpha.numel() == 1);
    CHECK(records[0].alpha[0] == 1.0);
}

TEST_CASE("network outputs are permutation-equivariant") {
    const PanelCase pc = small_case(2, 902);
    const HeteroGraph g = build_variant(pc, Variant::f);

    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 16;
    cfg.heads = 4;
    ParamStore store;
    Rng rng(11);
    const Model model(cfg, relation_catalog(VariantSpec::for_variant(Variant::f)), store, rng);

    // Permute every node type by reversal, remapping features, masks and
    // link endpoints (storage order of the links is preserved).
    HeteroGraph perm = g;
    std::vector<std::vector<std::int32_t>> maps(static_cast<size_t>(g.n_node_types()));
    for (int t = 0; t < g.n_node_types(); ++t) {
        const int n = g.n_nodes(t);
        auto& map = maps[static_cast<size_t>(t)];
        map.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) map[static_cast<size_t>(i)] = n - 1 - i;
        Tensor f = g.features[static_cast<size_t>(t)];
        for (int i = 0; i < n; ++i) {
            for (std::int64_t c = 0; c < f.cols(); ++c) {
                f.at(map[static_cast<size_t>(i)], c) = g.features[static_cast<size_t>(t)].at(i, c);
            }
        }
        perm.features[static_cast<size_t>(t)] = std::move(f);
        if (!g.known_mask[static_cast<size_t>(t)].empty()) {
            auto m = g.known_mask[static_cast<size_t>(t)];
            for (int i = 0; i < n; ++i) {
                m[static_cast<size_t>(map[static_cast<size_t>(i)])] =
                    g.known_mask[static_cast<size_t>(t)][static_cast<size_t>(i)];
            }
            perm.known_mask[static_cast<size_t>(t)] = std::move(m);
        }
    }
    for (size_t r = 0; r < g.links.size(); ++r) {
        const auto& rel = g.catalog.relations[r];
        for (size_t l = 0; l < g.links[r].src.size(); ++l) {
            perm.links[r].src[l] =
                maps[static_cast<size_t>(rel.src_type)][static_cast<size_t>(g.links[r].src[l])];
            perm.links[r].dst[l] =
                maps[static_cast<size_t>(rel.dst_type)][static_cast<size_t>(g.links[r].dst[l])];
        }
    }

    const Tensor base = model.predict(g);
    const Tensor moved = model.predict(perm);
    const auto& geo_map = maps[static_cast<size_t>(model.output_type())];
    REQUIRE(base.same_shape(moved));
    double worst = 0.0;
    for (std::int64_t i = 0; i < base.rows(); ++i) {
        for (std::int64_t c = 0; c < base.cols(); ++c) {
            worst = std::max(worst,
                             std::abs(base.at(i, c) - moved.at(geo_map[static_cast<size_t>(i)], c)));
        }
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("model gradients agree with finite differences across representations") {
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;

    SUBCASE("variant e") {
        const PanelCase pc = small_case(1, 903);
        const HeteroGraph g = build_variant(pc, Variant::e);
        ParamStore store;
        Rng rng(21);
        const Model model(cfg, relation_catalog(VariantSpec::for_variant(Variant::e)), store, rng);
        const Tensor target = random_target(g.n_nodes(model.output_type()), 200, 31);
        check_model_gradients(model, g, target, 41, 120);
    }
    SUBCASE("variant c with edge nodes") {
        const PanelCase pc = small_case(1, 904);
        const HeteroGraph g = build_variant(pc, Variant::c);
        ParamStore store;
        Rng rng(22);
        const Model model(cfg, relation_catalog(VariantSpec::for_variant(Variant::c)), store, rng);
        const Tensor target = random_target(g.n_nodes(model.output_type()), 200, 32);
        check_model_gradients(model, g, target, 42, 120);
    }
    SUBCASE("homogeneous baseline") {
        const PanelCase pc = small_case(1, 905);
        const HeteroGraph g = build_variant(pc, Variant::homogeneous);
        ParamStore store;
        Rng rng(23);
        const Model model(cfg, homogeneous_catalog(), store, rng);
        const Tensor target = random_target(g.n_nodes(model.output_type()), 200, 33);
        check_model_gradients(model, g, target, 43, 120);
    }
}

TEST_CASE("rmse loss scales linearly and sum-of-squares gradient is 2p") {
    ParamStore store;
    const int pid = store.add("p", Tensor::from_values({2, 2}, {0.5, -1.25, 2.0, 0.75}));

    {
        Tape tape(&store);
        const int p = tape.param(pid);
        tape.backward(tape.sum_squares(p));
        for (std::int64_t i = 0; i < 4; ++i) {
            CHECK(store.grad(pid)[i] == 2.0 * store.value(pid)[i]);
        }
    }

    Tape tape(&store);
    const int pred = tape.constant(Tensor::from_values({1, 3}, {1.0, 2.0, -1.0}));
    const Tensor target = Tensor::from_values({1, 3}, {0.5, 1.0, 1.0});
    const double l1 = tape.scalar(tape.rmse_loss(pred, target));
    const int pred2 = tape.mul_const(pred, 2.0);
    Tensor target2 = target;
    for (std::int64_t i = 0; i < 3; ++i) target2[i] *= 2.0;
    const double l2 = tape.scalar(tape.rmse_loss(pred2, target2));
    CHECK(std::abs(l2 - 2.0 * l1) < 1e-14);
    // Hand value: diffs (0.5, 1, -2) -> rmse = sqrt(5.25/3).
    CHECK(std::abs(l1 - std::sqrt(5.25 / 3.0)) < 1e-15);
}

TEST_CASE("adam first step moves each weight by about -lr times sign(grad)") {
    ParamStore store;
    const int pid = store.add("w", Tensor::from_values({4}, {1.0, -2.0, 0.5, 3.0}));
    store.grad(pid) = Tensor::from_values({4}, {0.3, -1.7, 2.1, -0.04});
    AdamState state(store);
    AdamConfig cfg;
    cfg.lr = 1e-3;
    cfg.weight_decay = 0.0;
    const Tensor before = store.value(pid);
    const Tensor g = store.grad(pid);
    state.step(store, cfg);
    CHECK(state.step_count() == 1);
    for (std::int64_t i = 0; i < 4; ++i) {
        const double expect = before[i] - cfg.lr * (g[i] > 0 ? 1.0 : -1.0);
        CHECK(std::abs(store.value(pid)[i] - expect) < 1e-6);
    }
}

TEST_CASE("decoupled weight decay shrinks parameters and skips exempt ones") {
    ParamStore store;
    const int pid = store.add("w", Tensor::full({1}, 1.0));
    const int mid = store.add("mu", Tensor::full({1}, 1.0), /*decay_exempt=*/true);
    AdamState state(store);
    AdamConfig cfg;
    cfg.lr = 1e-2;
    cfg.weight_decay = 1e-5;
    state.step(store, cfg);  // gradients are zero
    CHECK(store.value(pid)[0] == doctest::Approx(1.0 - 1e-2 * 1e-5).epsilon(1e-12));
    CHECK(store.value(pid)[0] < 1.0);
    CHECK(store.value(mid)[0] == 1.0);

    store.grad(pid)[0] = std::nan("");
    CHECK_THROWS_AS(state.step(store, cfg), NumericError);
}

TEST_CASE("batch norm: training statistics, running buffers, eval affine map") {
    ParamStore store;
    const int gid = store.add("gamma", Tensor::full({2}, 1.5));
    const int bid = store.add("beta", Tensor::from_values({2}, {0.25, -0.5}));
    Tensor rm = Tensor::zeros({2});
    Tensor rv = Tensor::full({2}, 1.0);

    Tensor x = Tensor::from_values({4, 2}, {1.0, -2.0, 3.0, 0.5, -1.0, 1.5, 2.0, 4.0});
    {
        Tape tape(&store);
        const int y = tape.batch_norm(tape.constant(x), tape.param(gid), tape.param(bid), &rm,
                                      &rv, /*training=*/true);
        // Column means: 1.25, 1.0. Momentum 0.1 mixes them into the buffers.
        CHECK(rm[0] == doctest::Approx(0.1 * 1.25).epsilon(1e-12));
        CHECK(rm[1] == doctest::Approx(0.1 * 1.0).epsilon(1e-12));
        CHECK(rv[0] > 0.9);  // (1 - 0.1) * 1 + 0.1 * unbiased variance
        // Normalized columns have zero mean under gamma/beta mapping.
        const Tensor& yv = tape.val(y);
        double mean0 = 0.0;
        for (int r = 0; r < 4; ++r) mean0 += yv.at(r, 0);
        CHECK(std::abs(mean0 / 4.0 - 0.25) < 1e-12);  // beta[0]
    }
    {
        // Eval mode: a fixed affine map, bitwise repeatable, buffers untouched.
        const Tensor rm_before = rm;
        const Tensor rv_before = rv;
        Tape tape(&store);
        const int y1 = tape.batch_norm(tape.constant(x), tape.param(gid), tape.param(bid), &rm,
                                       &rv, /*training=*/false);
        const int y2 = tape.batch_norm(tape.constant(x), tape.param(gid), tape.param(bid), &rm,
                                       &rv, /*training=*/false);
        const Tensor& a = tape.val(y1);
        const Tensor& b = tape.val(y2);
        for (std::int64_t i = 0; i < a.numel(); ++i) CHECK(a[i] == b[i]);
        for (int c = 0; c < 2; ++c) {
            CHECK(rm[c] == rm_before[c]);
            CHECK(rv[c] == rv_before[c]);
            const double inv = 1.0 / std::sqrt(rv[c] + 1e-5);
            const double expect = 1.5 * (x.at(1, c) - rm[c]) * inv +
                                  store.value(bid)[c];
            CHECK(a.at(1, c) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("count_parameters orders the variants e < f < c < d < a < b") {
    NetworkConfig cfg;  // defaults: 6 layers, 64 hidden, 4 heads
    std::map<Variant, std::int64_t> counts;
    for (const Variant v : {Variant::a, Variant::b, Variant::c, Variant::d, Variant::e,
                            Variant::f}) {
        counts[v] = count_parameters(cfg, relation_catalog(VariantSpec::for_variant(v)));
    }
    const std::int64_t homo = count_parameters(cfg, homogeneous_catalog());

    CHECK(counts[Variant::e] < counts[Variant::f]);
    CHECK(counts[Variant::f] < counts[Variant::c]);
    CHECK(counts[Variant::c] < counts[Variant::d]);
    CHECK(counts[Variant::d] < counts[Variant::a]);
    CHECK(counts[Variant::a] < counts[Variant::b]);
    CHECK(homo < counts[Variant::e]);

    // (f) adds to (e): a loading-node encoder, one relation pair per layer,
    // and one per-type parameter block (projections + batch norm) per layer.
    // The 20 load columns leave the geometry encoder in (f), so the encoder
    // weights cancel and only the loading bias remains on the encoder side.
    const std::int64_t d = cfg.hidden;
    const std::int64_t L = cfg.layers;
    const std::int64_t per_rel = 2 * d * d / cfg.heads + 1;
    const std::int64_t expect_diff = d + L * (4 * d * d + 2 * d) + L * 2 * per_rel;
    CHECK(counts[Variant::f] - counts[Variant::e] == expect_diff);

    // More width, more parameters.
    NetworkConfig wide = cfg;
    wide.hidden = 128;
    CHECK(count_parameters(wide, relation_catalog(VariantSpec::for_variant(Variant::e))) >
          3 * counts[Variant::e]);
}

TEST_CASE("count_parameters matches the registered scalar total per variant") {
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;
    for (const Variant v : {Variant::a, Variant::c, Variant::e, Variant::homogeneous}) {
        const RelationCatalog cat =
            v == Variant::homogeneous ? homogeneous_catalog()
                                      : relation_catalog(VariantSpec::for_variant(v));
        ParamStore store;
        Rng rng(3);
        const Model model(cfg, cat, store, rng);
        CHECK(count_parameters(cfg, cat) == store.total_scalars());
    }
}

TEST_CASE("model construction is deterministic in the seed") {
    const PanelCase pc = small_case(1, 906);
    const HeteroGraph g = build_variant(pc, Variant::e);
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;
    const RelationCatalog cat = relation_catalog(VariantSpec::for_variant(Variant::e));

    ParamStore s1, s2;
    Rng r1(77), r2(77);
    const Model m1(cfg, cat, s1, r1);
    const Model m2(cfg, cat, s2, r2);
    REQUIRE(s1.count() == s2.count());
    for (int i = 0; i < s1.count(); ++i) {
        REQUIRE(s1.value(i).numel() == s2.value(i).numel());
        for (std::int64_t k = 0; k < s1.value(i).numel(); ++k) {
            CHECK(s1.value(i)[k] == s2.value(i)[k]);
        }
    }
    const Tensor p1 = m1.predict(g);
    const Tensor p2 = m2.predict(g);
    for (std::int64_t i = 0; i < p1.numel(); ++i) CHECK(p1[i] == p2[i]);
}

TEST_CASE("zeroed output head produces all-zero predictions") {
    const PanelCase pc = small_case(1, 907);
    const HeteroGraph g = build_variant(pc, Variant::e);
    NetworkConfig cfg;
    cfg.layers = 1;
    cfg.hidden = 8;
    cfg.heads = 2;
    ParamStore store;
    Rng rng(5);
    const Model model(cfg, relation_catalog(VariantSpec::for_variant(Variant::e)), store, rng);
    store.value(store.find("head.weight")).fill(0.0);
    store.value(store.find("head.bias")).fill(0.0);
    const Tensor pred = model.predict(g);
    CHECK(pred.rows() == g.n_nodes(model.output_type()));
    CHECK(pred.cols() == 200);
    for (std::int64_t i = 0; i < pred.numel(); ++i) CHECK(pred[i] == 0.0);
}

TEST_CASE("numeric faults name the offending layer and relation") {
    const PanelCase pc = small_case(1, 908);
    const HeteroGraph g = build_variant(pc, Variant::e);
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;
    ParamStore store;
    Rng rng(6);
    const Model model(cfg, relation_catalog(VariantSpec::for_variant(Variant::e)), store, rng);
    // Poison one attention projection so the first layer's logits overflow.
    const int bad = store.find("layer0.geometry__x_py__boundary_combined.w_att");
    REQUIRE(bad >= 0);
    store.value(bad).fill(1e308);
    try {
        model.predict(g);
        FAIL("expected a NumericError");
    } catch (const NumericError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("layer 0") != std::string::npos);
        CHECK(msg.find("relation") != std::string::npos);
        CHECK(e.code() == ExitCode::numeric);
    }
}

TEST_CASE("null embedding receives gradient from unknown boundary rows") {
    const PanelCase pc = small_case(1, 909);  // has interior (unknown) edges
    const HeteroGraph g = build_variant(pc, Variant::e);
    NetworkConfig cfg;
    cfg.layers = 1;
    cfg.hidden = 8;
    cfg.heads = 2;
    ParamStore store;
    Rng rng(8);
    const Model model(cfg, relation_catalog(VariantSpec::for_variant(Variant::e)), store, rng);
    const int nid = store.find("null.boundary_combined");
    REQUIRE(nid >= 0);
    // Zero-initialized by contract.
    for (std::int64_t i = 0; i < store.value(nid).numel(); ++i) {
        CHECK(store.value(nid)[i] == 0.0);
    }

    const Tensor target = random_target(g.n_nodes(model.output_type()), 200, 99);
    store.zero_grads();
    Tape tape(&store);
    const int pred = model.forward(tape, g, /*training=*/true);
    tape.backward(tape.rmse_loss(pred, target));
    double norm = 0.0;
    for (std::int64_t i = 0; i < store.grad(nid).numel(); ++i) {
        norm += std::abs(store.grad(nid)[i]);
    }
    CHECK(norm > 0.0);
}

TEST_CASE("attention_scores returns per-link weights for a chosen relation") {
    const PanelCase pc = small_case(1, 910);
    const HeteroGraph g = build_variant(pc, Variant::e);
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;
    ParamStore store;
    Rng rng(9);
    const Model model(cfg, relation_catalog(VariantSpec::for_variant(Variant::e)), store, rng);
    for (size_t r = 0; r < g.catalog.relations.size(); ++r) {
        const Tensor alpha = model.attention_scores(g, 1, static_cast<int>(r));
        CHECK(alpha.rows() == static_cast<std::int64_t>(g.links[r].src.size()));
        CHECK(alpha.cols() == cfg.heads);
        for (std::int64_t i = 0; i < alpha.numel(); ++i) {
            CHECK(alpha[i] >= 0.0);
            CHECK(alpha[i] <= 1.0);
        }
    }
    CHECK_THROWS_AS(model.attention_scores(g, 5, 0), UsageError);
}
