#include "hetpanel/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"
#include "hetpanel/nn/tape.hpp"

namespace hetpanel {

namespace {

struct Snapshot {
    std::vector<Tensor> values;
    std::vector<Tensor> buffers;
};

Snapshot take_snapshot(const ParamStore& store) {
    Snapshot s;
    s.values.reserve(static_cast<size_t>(store.count()));
    for (int i = 0; i < store.count(); ++i) s.values.push_back(store.value(i));
    s.buffers.reserve(static_cast<size_t>(store.buffer_count()));
    for (int i = 0; i < store.buffer_count(); ++i) s.buffers.push_back(store.buffer(i));
    return s;
}

void restore_snapshot(ParamStore& store, const Snapshot& s) {
    for (int i = 0; i < store.count(); ++i) store.value(i) = s.values[static_cast<size_t>(i)];
    for (int i = 0; i < store.buffer_count(); ++i) {
        store.buffer(i) = s.buffers[static_cast<size_t>(i)];
    }
}

/// Physical-unit RMSE of an eval-mode prediction against physical targets.
double eval_rmse(const Model& model, const HeteroGraph& g, const Tensor& targets_phys,
                 const Normalization& norm, Channel c) {
    const Tensor pred = norm.denormalize_matrix(model.predict(g), c);
    return rmse(targets_phys, pred);
}

}  // namespace

void TrainConfig::validate() const {
    network.validate();
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
}

TrainResult train_run(const TrainConfig& cfg, const Dataset& ds, const GraphSet& graphs,
                      const std::vector<int>* train_subset) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    if (graphs.variant() != cfg.variant) {
        throw UsageError("train_run: graph set was built for variant '" +
                         variant_name(graphs.variant()) + "', config asks for '" +
                         variant_name(cfg.variant) + "'");
    }
    if (graphs.size() != ds.size()) {
        throw UsageError("train_run: graph set and dataset sizes differ");
    }
    const std::vector<int>& train_idx = train_subset != nullptr ? *train_subset : ds.split.train;
    if (train_idx.empty()) throw UsageError("train_run: training split is empty");
    if (ds.split.val.empty()) throw UsageError("train_run: validation split is empty");
    if (ds.split.test.empty()) throw UsageError("train_run: test split is empty");
    for (const int i : train_idx) {
        if (i < 0 || i >= ds.size()) {
            throw UsageError("train_run: training index " + std::to_string(i) +
                             " out of range");
        }
    }

    TrainResult result;
    result.store = std::make_unique<ParamStore>();
    Rng init_rng(Rng::derive(cfg.seed, "init"));
    result.model = std::make_unique<Model>(cfg.network, graphs.catalog(), *result.store,
                                           init_rng);
    ParamStore& store = *result.store;
    Model& model = *result.model;

    // One seeded batch partition per run; batches are pre-merged so each
    // epoch touches identical graph memory in identical order.
    std::vector<int> order = train_idx;
    Rng batch_rng(Rng::derive(cfg.seed, "batchorder"));
    batch_rng.shuffle(order);
    const int bs = cfg.network.batch_size;
    struct Batch {
        HeteroGraph graph;
        Tensor targets_z;
    };
    std::vector<Batch> batches;
    for (size_t at = 0; at < order.size(); at += static_cast<size_t>(bs)) {
        const size_t end = std::min(order.size(), at + static_cast<size_t>(bs));
        const std::vector<int> chunk(order.begin() + static_cast<long>(at),
                                     order.begin() + static_cast<long>(end));
        Batch b{graphs.merged(chunk),
                ds.norm.normalize_matrix(graphs.merged_targets(chunk, cfg.channel),
                                         cfg.channel)};
        batches.push_back(std::move(b));
    }

    const HeteroGraph val_graph = graphs.merged(ds.split.val);
    const Tensor val_targets = graphs.merged_targets(ds.split.val, cfg.channel);
    const HeteroGraph test_graph = graphs.merged(ds.split.test);
    const Tensor test_targets = graphs.merged_targets(ds.split.test, cfg.channel);

    AdamState opt(store);
    AdamConfig ocfg;
    ocfg.lr = cfg.network.lr;
    ocfg.weight_decay = cfg.network.l2;

    RunMetrics& metrics = result.metrics;
    metrics.parameter_count = store.total_scalars();
    metrics.train_rmse.reserve(static_cast<size_t>(cfg.epochs));
    metrics.val_rmse.reserve(static_cast<size_t>(cfg.epochs));
    Snapshot best;
    const double channel_std = ds.norm.stdev[static_cast<size_t>(cfg.channel)];

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        for (size_t b = 0; b < batches.size(); ++b) {
            try {
                Tape tape(&store);
                const int pred = model.forward(tape, batches[b].graph, /*training=*/true);
                const int loss = tape.rmse_loss(pred, batches[b].targets_z);
                const double loss_val = tape.scalar(loss);
                if (!std::isfinite(loss_val)) {
                    throw NumericError("non-finite training loss");
                }
                store.zero_grads();
                tape.backward(loss);
                opt.step(store, ocfg);
                loss_sum += loss_val;
            } catch (const NumericError& e) {
                throw NumericError("training aborted at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(b + 1) + " of " +
                                   std::to_string(batches.size()) + ": " + e.what());
            }
        }
        // Mean minibatch RMSE, denormalized: physical = std * normalized.
        metrics.train_rmse.push_back(channel_std * loss_sum /
                                     static_cast<double>(batches.size()));

        const double val = eval_rmse(model, val_graph, val_targets, ds.norm, cfg.channel);
        metrics.val_rmse.push_back(val);
        if (val < metrics.best_val_rmse) {
            metrics.best_val_rmse = val;
            metrics.best_epoch = epoch;
            best = take_snapshot(store);
        }
    }

    restore_snapshot(store, best);
    metrics.final_test_rmse = eval_rmse(model, test_graph, test_targets, ds.norm, cfg.channel);
    metrics.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

std::vector<double> percentile_ranks(const std::vector<double>& record_errors) {
    const size_t n = record_errors.size();
    std::vector<double> out(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        size_t not_worse = 0;
        for (size_t j = 0; j < n; ++j) {
            if (record_errors[j] <= record_errors[i]) ++not_worse;
        }
        out[i] = 100.0 * static_cast<double>(not_worse) / static_cast<double>(n);
    }
    return out;
}

ChannelEval evaluate_channel(const Model& model, const Dataset& ds, const GraphSet& graphs,
                             const std::vector<int>& indices, Channel channel) {
    if (indices.empty()) throw UsageError("evaluate_channel: empty index list");
    const HeteroGraph g = graphs.merged(indices);
    const Tensor truth = graphs.merged_targets(indices, channel);
    const Tensor pred = ds.norm.denormalize_matrix(model.predict(g), channel);
    if (!pred.same_shape(truth)) {
        throw UsageError("evaluate_channel: prediction shape " + pred.shape_str() +
                         " does not match targets " + truth.shape_str());
    }

    ChannelEval ev;
    ev.rmse_total = rmse(truth, pred);
    std::int64_t row = 0;
    for (size_t k = 0; k < indices.size(); ++k) {
        const std::int64_t n_units = g.case_unit_counts[k];
        double acc = 0.0;
        for (std::int64_t r = row; r < row + n_units; ++r) {
            for (std::int64_t c = 0; c < truth.cols(); ++c) {
                const double d = truth.at(r, c) - pred.at(r, c);
                acc += d * d;
            }
        }
        ev.record_rmse.push_back(
            std::sqrt(acc / static_cast<double>(n_units * truth.cols())));
        row += n_units;
    }
    ev.percentile = percentile_ranks(ev.record_rmse);
    return ev;
}

ChannelEval evaluate_total_displacement(const Model& model_u1, const Model& model_u2,
                                        const Model& model_u3, const Dataset& ds,
                                        const GraphSet& graphs,
                                        const std::vector<int>& indices) {
    if (indices.empty()) throw UsageError("evaluate_total_displacement: empty index list");
    const HeteroGraph g = graphs.merged(indices);
    const Tensor p1 = ds.norm.denormalize_matrix(model_u1.predict(g), Channel::u1);
    const Tensor p2 = ds.norm.denormalize_matrix(model_u2.predict(g), Channel::u2);
    const Tensor p3 = ds.norm.denormalize_matrix(model_u3.predict(g), Channel::u3);
    const Tensor t1 = graphs.merged_targets(indices, Channel::u1);
    const Tensor t2 = graphs.merged_targets(indices, Channel::u2);
    const Tensor t3 = graphs.merged_targets(indices, Channel::u3);
    if (!p1.same_shape(t1) || !p2.same_shape(t2) || !p3.same_shape(t3)) {
        throw UsageError("evaluate_total_displacement: prediction/target shape mismatch");
    }

    Tensor pred_mag({t1.rows(), t1.cols()});
    Tensor true_mag({t1.rows(), t1.cols()});
    for (std::int64_t i = 0; i < t1.numel(); ++i) {
        pred_mag[i] = std::sqrt(p1[i] * p1[i] + p2[i] * p2[i] + p3[i] * p3[i]);
        true_mag[i] = std::sqrt(t1[i] * t1[i] + t2[i] * t2[i] + t3[i] * t3[i]);
    }

    ChannelEval ev;
    ev.rmse_total = rmse(true_mag, pred_mag);
    std::int64_t row = 0;
    for (size_t k = 0; k < indices.size(); ++k) {
        const std::int64_t n_units = g.case_unit_counts[k];
        double acc = 0.0;
        for (std::int64_t r = row; r < row + n_units; ++r) {
            for (std::int64_t c = 0; c < true_mag.cols(); ++c) {
                const double d = true_mag.at(r, c) - pred_mag.at(r, c);
                acc += d * d;
            }
        }
        ev.record_rmse.push_back(
            std::sqrt(acc / static_cast<double>(n_units * true_mag.cols())));
        row += n_units;
    }
    ev.percentile = percentile_ranks(ev.record_rmse);
    return ev;
}

}  // namespace hetpanel
