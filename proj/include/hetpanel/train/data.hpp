#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hetpanel/core/tensor.hpp"
#include "hetpanel/graph/graph.hpp"
#include "hetpanel/panel/case.hpp"

namespace hetpanel {

/// Root mean squared error over all entries: sqrt(sum((y-yhat)^2)/n).
/// Accumulates in storage order so the value is bit-stable.
double rmse(const Tensor& y, const Tensor& yhat);

/// Per-channel affine target transform (z-score) fitted on the training
/// split only; denormalize(normalize(v)) round-trips within 1e-12.
struct Normalization {
    std::array<double, kNumChannels> mean{};
    std::array<double, kNumChannels> stdev{{1.0, 1.0, 1.0, 1.0}};

    double normalize(Channel c, double v) const {
        const auto i = static_cast<size_t>(c);
        return (v - mean[i]) / stdev[i];
    }
    double denormalize(Channel c, double v) const {
        const auto i = static_cast<size_t>(c);
        return v * stdev[i] + mean[i];
    }
    Tensor normalize_matrix(Tensor t, Channel c) const;
    Tensor denormalize_matrix(Tensor t, Channel c) const;
};

/// Record indices of the three splits, in shuffled draw order.
struct Split {
    std::vector<int> train, val, test;
};

/// Seeded shuffle of [0, n) cut at rounded fractions. The splits are
/// disjoint and exhaustive for any seed; fractions must sum to 1.
Split split_dataset(int n_records, double train_frac, double val_frac, double test_frac,
                    std::uint64_t seed);

/// Channel statistics over the listed cases (population mean/std over every
/// grid entry). A degenerate channel (std < 1e-12) falls back to std = 1.
Normalization fit_normalization(const std::vector<PanelCase>& cases,
                                const std::vector<int>& indices);

/// Solved cases plus their split and training-split normalization.
struct Dataset {
    std::vector<PanelCase> cases;
    Split split;
    Normalization norm;

    int size() const { return static_cast<int>(cases.size()); }

    /// Splits with the given seed and fits normalization on the train split.
    static Dataset make(std::vector<PanelCase> cases, std::uint64_t split_seed,
                        double train_frac = 0.8, double val_frac = 0.1,
                        double test_frac = 0.1);
};

/// One channel's [n_units x 200] slice of a [n_units x 800] target matrix.
Tensor channel_block(const Tensor& target_matrix, Channel c);

/// Graphs for one variant over a whole dataset, plus per-case target
/// matrices, with helpers to merge index subsets for batched passes.
class GraphSet {
public:
    GraphSet(const std::vector<PanelCase>& cases, Variant variant);

    Variant variant() const { return variant_; }
    const RelationCatalog& catalog() const;
    int size() const { return static_cast<int>(graphs_.size()); }
    const HeteroGraph& graph(int i) const { return graphs_.at(static_cast<size_t>(i)); }
    const Tensor& target_matrix_of(int i) const { return targets_.at(static_cast<size_t>(i)); }

    /// Disjoint union of the listed cases, links and rows in list order.
    HeteroGraph merged(const std::vector<int>& indices) const;
    /// Row-stacked [sum n_units x 200] physical-unit targets, same order.
    Tensor merged_targets(const std::vector<int>& indices, Channel c) const;

private:
    Variant variant_;
    std::vector<HeteroGraph> graphs_;
    std::vector<Tensor> targets_;  // per case, [n_units x 800]
};

}  // namespace hetpanel
