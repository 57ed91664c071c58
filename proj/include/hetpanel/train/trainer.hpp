#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "hetpanel/nn/adam.hpp"
#include "hetpanel/nn/model.hpp"
#include "hetpanel/train/data.hpp"

namespace hetpanel {

/// Everything one training run needs: architecture + optimization
/// hyperparameters (in `network`), protocol, target channel and variant.
struct TrainConfig {
    NetworkConfig network;
    int epochs = 1000;
    std::uint64_t seed = 0;
    Channel channel = Channel::stress;
    Variant variant = Variant::d;

    void validate() const;
};

/// Curves and summary metrics of one run. RMSE values are in denormalized
/// physical units (mm for displacements, MPa for the stress proxy).
struct RunMetrics {
    std::vector<double> train_rmse;  // per epoch: mean over minibatch losses
    std::vector<double> val_rmse;    // per epoch: full validation pass
    double best_val_rmse = std::numeric_limits<double>::infinity();
    int best_epoch = -1;             // 1-based epoch of the retained checkpoint
    double final_test_rmse = 0.0;    // test RMSE of the best-validation params
    double wall_seconds = 0.0;
    std::int64_t parameter_count = 0;
};

/// A finished run: the store holds the best-validation parameters and
/// buffers, and `model` is bound to it for further evaluation.
struct TrainResult {
    std::unique_ptr<ParamStore> store;
    std::unique_ptr<Model> model;
    RunMetrics metrics;
};

/// Minibatch Adam training of one network on one channel's z-scored
/// targets.  The batch partition is drawn once per run from the run seed,
/// so a run is a pure function of (config, dataset, subset).  Training
/// aborts with a NumericError naming the epoch and batch if the loss or any
/// gradient goes non-finite.  `train_subset`, when given, overrides the
/// training index list (used by the data-size study); validation and test
/// splits always come from `ds.split`.
TrainResult train_run(const TrainConfig& cfg, const Dataset& ds, const GraphSet& graphs,
                      const std::vector<int>* train_subset = nullptr);

/// Per-record evaluation of one trained channel model over `indices`.
struct ChannelEval {
    double rmse_total = 0.0;            // pooled over every grid entry
    std::vector<double> record_rmse;    // per record, physical units
    std::vector<double> percentile;     // 100 * rank / n; worst record = 100
};

ChannelEval evaluate_channel(const Model& model, const Dataset& ds, const GraphSet& graphs,
                             const std::vector<int>& indices, Channel channel);

/// Total-displacement evaluation: the three translational models' predictions
/// are combined into a vector-magnitude field per grid point and compared
/// against the magnitude of the true displacement field.
ChannelEval evaluate_total_displacement(const Model& model_u1, const Model& model_u2,
                                        const Model& model_u3, const Dataset& ds,
                                        const GraphSet& graphs,
                                        const std::vector<int>& indices);

/// Percentile ranks (100 = worst) for a vector of per-record errors:
/// 100 * |{j : err_j <= err_i}| / n.
std::vector<double> percentile_ranks(const std::vector<double>& record_errors);

}  // namespace hetpanel
