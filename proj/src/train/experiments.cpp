#include "hetpanel/train/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"

namespace hetpanel {

namespace {

struct MeanStd {
    double mean = 0.0;
    double stdev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd ms;
    const auto n = static_cast<double>(xs.size());
    for (const double x : xs) ms.mean += x;
    ms.mean /= n;
    if (xs.size() > 1) {
        double sq = 0.0;
        for (const double x : xs) sq += (x - ms.mean) * (x - ms.mean);
        ms.stdev = std::sqrt(sq / (n - 1.0));
    }
    return ms;
}

void check_seeds(int n_seeds) {
    if (n_seeds < 1) throw UsageError("experiments need at least one repeat seed");
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master_seed, int k) {
    return Rng::derive(master_seed, "run", static_cast<std::uint64_t>(k));
}

std::vector<AblationRow> ablation_run(const Dataset& ds, const std::vector<Variant>& variants,
                                      const TrainConfig& base, int n_seeds) {
    check_seeds(n_seeds);
    if (variants.empty()) throw UsageError("ablation_run: no variants given");
    std::vector<AblationRow> rows;
    for (const Variant v : variants) {
        const GraphSet graphs(ds.cases, v);
        AblationRow row;
        row.variant = v;
        std::vector<double> rmses;
        for (int k = 0; k < n_seeds; ++k) {
            TrainConfig cfg = base;
            cfg.variant = v;
            cfg.seed = run_seed(base.seed, k);
            const TrainResult res = train_run(cfg, ds, graphs);
            rmses.push_back(res.metrics.final_test_rmse);
            row.param_count = res.metrics.parameter_count;
        }
        const MeanStd ms = mean_std(rmses);
        row.rmse_mean = ms.mean;
        row.rmse_std = ms.stdev;
        rows.push_back(row);
    }
    double best = rows.front().rmse_mean;
    for (const AblationRow& r : rows) best = std::min(best, r.rmse_mean);
    for (AblationRow& r : rows) {
        r.pct_from_best = best > 0.0 ? 100.0 * (r.rmse_mean - best) / best
                                     : (r.rmse_mean == best ? 0.0 : 100.0);
    }
    return rows;
}

namespace {

CompareSide run_side(const std::string& label, Variant v, const Dataset& ds,
                     const TrainConfig& base, int n_seeds) {
    const GraphSet graphs(ds.cases, v);
    CompareSide side;
    side.label = label;
    std::vector<double> rmses;
    for (int k = 0; k < n_seeds; ++k) {
        TrainConfig cfg = base;
        cfg.variant = v;
        cfg.seed = run_seed(base.seed, k);
        TrainResult res = train_run(cfg, ds, graphs);
        rmses.push_back(res.metrics.final_test_rmse);
        side.param_count = res.metrics.parameter_count;
        side.runs.push_back(std::move(res.metrics));
    }
    const MeanStd ms = mean_std(rmses);
    side.rmse_mean = ms.mean;
    side.rmse_std = ms.stdev;
    return side;
}

}  // namespace

CompareResult compare_homo_hetero(const Dataset& ds, const TrainConfig& base, int n_seeds) {
    check_seeds(n_seeds);
    CompareResult result;
    result.hgt = run_side("hgt_variant_d", Variant::d, ds, base, n_seeds);
    result.sage = run_side("graphsage_homogeneous", Variant::homogeneous, ds, base, n_seeds);
    return result;
}

void SearchSpace::validate(int heads) const {
    if (!(lr_min > 0.0) || !(lr_max >= lr_min)) {
        throw UsageError("search space: lr range must satisfy 0 < lr_min <= lr_max");
    }
    if (layers_min < 1 || layers_max < layers_min) {
        throw UsageError("search space: layer range must satisfy 1 <= layers_min <= layers_max");
    }
    if (hidden_choices.empty()) throw UsageError("search space: no hidden widths");
    for (const int h : hidden_choices) {
        if (h < 1 || h % heads != 0) {
            throw UsageError("search space: hidden width " + std::to_string(h) +
                             " is not divisible by " + std::to_string(heads) + " heads");
        }
    }
    if (!(l2_min >= 0.0) || !(l2_max >= l2_min)) {
        throw UsageError("search space: l2 range must satisfy 0 <= l2_min <= l2_max");
    }
}

double scrambled_radical_inverse(std::uint64_t index, int base, std::uint64_t seed) {
    // A fixed digit bijection per (base, seed): identity shuffled once.
    std::vector<int> perm(static_cast<size_t>(base));
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(Rng::derive(seed, "digit-perm", static_cast<std::uint64_t>(base)));
    rng.shuffle(perm);

    double inv = 0.0;
    double digit_weight = 1.0 / static_cast<double>(base);
    std::uint64_t n = index + 1;  // skip the all-zero point
    while (n > 0) {
        const auto digit = static_cast<size_t>(n % static_cast<std::uint64_t>(base));
        inv += static_cast<double>(perm[digit]) * digit_weight;
        digit_weight /= static_cast<double>(base);
        n /= static_cast<std::uint64_t>(base);
    }
    // The implicit leading zeros are scrambled too; their geometric tail
    // keeps the map injective when perm[0] != 0 and stays strictly below 1.
    inv += static_cast<double>(perm[0]) * digit_weight * static_cast<double>(base) /
           static_cast<double>(base - 1);
    return inv;
}

std::vector<SearchRow> quasi_random_search(const SearchSpace& space, int budget,
                                           const Dataset& ds, const TrainConfig& base,
                                           std::uint64_t scramble_seed) {
    if (budget < 1) throw UsageError("quasi_random_search: budget must be at least 1");
    space.validate(base.network.heads);

    // One prime base per axis; scrambling decorrelates the dimensions.
    constexpr int kLrBase = 2, kLayersBase = 3, kHiddenBase = 5, kL2Base = 7;
    const std::uint64_t shared_seed = Rng::derive(base.seed, "search");
    const GraphSet graphs(ds.cases, base.variant);

    std::vector<SearchRow> rows;
    for (int i = 0; i < budget; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        const double u_lr = scrambled_radical_inverse(idx, kLrBase, scramble_seed);
        const double u_layers = scrambled_radical_inverse(idx, kLayersBase, scramble_seed);
        const double u_hidden = scrambled_radical_inverse(idx, kHiddenBase, scramble_seed);
        const double u_l2 = scrambled_radical_inverse(idx, kL2Base, scramble_seed);

        TrainConfig cfg = base;
        cfg.seed = shared_seed;
        cfg.network.lr = std::exp(std::log(space.lr_min) +
                                  u_lr * (std::log(space.lr_max) - std::log(space.lr_min)));
        const int layer_span = space.layers_max - space.layers_min + 1;
        cfg.network.layers = space.layers_min +
                             std::min(layer_span - 1,
                                      static_cast<int>(u_layers * layer_span));
        const auto n_hidden = static_cast<int>(space.hidden_choices.size());
        cfg.network.hidden = space.hidden_choices[static_cast<size_t>(
            std::min(n_hidden - 1, static_cast<int>(u_hidden * n_hidden)))];
        // l2 log-uniform; a zero lower bound maps the first decade to zero.
        if (space.l2_min > 0.0) {
            cfg.network.l2 = std::exp(std::log(space.l2_min) +
                                      u_l2 * (std::log(space.l2_max) - std::log(space.l2_min)));
        } else {
            cfg.network.l2 = u_l2 * space.l2_max;
        }

        const TrainResult res = train_run(cfg, ds, graphs);
        SearchRow row;
        row.network = cfg.network;
        row.val_rmse = res.metrics.best_val_rmse;
        row.test_rmse = res.metrics.final_test_rmse;
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SearchRow& a, const SearchRow& b) {
                         return a.val_rmse < b.val_rmse;
                     });
    return rows;
}

std::vector<DataSizeRow> data_size_study(const Dataset& ds, const std::vector<int>& sizes,
                                         const TrainConfig& base, int n_seeds) {
    check_seeds(n_seeds);
    if (sizes.empty()) throw UsageError("data_size_study: no sizes given");
    const int available = static_cast<int>(ds.split.train.size());
    for (const int s : sizes) {
        if (s < 1) throw UsageError("data_size_study: sizes must be positive");
        if (s > available) {
            throw UsageError("data_size_study: size " + std::to_string(s) + " exceeds the " +
                             std::to_string(available) + " available training records");
        }
    }
    const GraphSet graphs(ds.cases, base.variant);
    std::vector<DataSizeRow> rows;
    for (const int s : sizes) {
        const std::vector<int> subset(ds.split.train.begin(), ds.split.train.begin() + s);
        DataSizeRow row;
        row.train_size = s;
        std::vector<double> rmses;
        for (int k = 0; k < n_seeds; ++k) {
            TrainConfig cfg = base;
            cfg.seed = run_seed(base.seed, k);
            const TrainResult res = train_run(cfg, ds, graphs, &subset);
            rmses.push_back(res.metrics.final_test_rmse);
        }
        const MeanStd ms = mean_std(rmses);
        row.rmse_mean = ms.mean;
        row.rmse_std = ms.stdev;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hetpanel
