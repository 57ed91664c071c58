#include "hetpanel/train/data.hpp"

#include <cmath>
#include <numeric>

#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"

namespace hetpanel {

double rmse(const Tensor& y, const Tensor& yhat) {
    if (!y.same_shape(yhat)) {
        throw UsageError("rmse: shape mismatch " + y.shape_str() + " vs " + yhat.shape_str());
    }
    if (y.numel() < 1) throw UsageError("rmse: empty input");
    double acc = 0.0;
    for (std::int64_t i = 0; i < y.numel(); ++i) {
        const double d = y[i] - yhat[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(y.numel()));
}

Tensor Normalization::normalize_matrix(Tensor t, Channel c) const {
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = normalize(c, t[i]);
    return t;
}

Tensor Normalization::denormalize_matrix(Tensor t, Channel c) const {
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = denormalize(c, t[i]);
    return t;
}

Split split_dataset(int n_records, double train_frac, double val_frac, double test_frac,
                    std::uint64_t seed) {
    if (n_records < 1) throw UsageError("cannot split an empty dataset");
    if (train_frac < 0.0 || val_frac < 0.0 || test_frac < 0.0 ||
        std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
        throw UsageError("split fractions must be non-negative and sum to 1");
    }
    std::vector<int> order(static_cast<size_t>(n_records));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    const auto n = static_cast<double>(n_records);
    auto n_train = static_cast<std::int64_t>(std::llround(n * train_frac));
    auto n_val = static_cast<std::int64_t>(std::llround(n * val_frac));
    if (n_train > n_records) n_train = n_records;
    if (n_train + n_val > n_records) n_val = n_records - n_train;

    Split s;
    s.train.assign(order.begin(), order.begin() + n_train);
    s.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    s.test.assign(order.begin() + n_train + n_val, order.end());
    return s;
}

Normalization fit_normalization(const std::vector<PanelCase>& cases,
                                const std::vector<int>& indices) {
    if (indices.empty()) throw UsageError("fit_normalization: no training records");
    Normalization norm;
    for (int c = 0; c < kNumChannels; ++c) {
        double sum = 0.0;
        std::int64_t count = 0;
        for (const int idx : indices) {
            for (const FieldGrid& fg : cases.at(static_cast<size_t>(idx)).targets) {
                const std::int64_t base = static_cast<std::int64_t>(c) * FieldGrid::kRows *
                                          FieldGrid::kCols;
                for (std::int64_t k = 0; k < FieldGrid::kRows * FieldGrid::kCols; ++k) {
                    sum += fg.data[static_cast<size_t>(base + k)];
                }
                count += FieldGrid::kRows * FieldGrid::kCols;
            }
        }
        if (count == 0) throw UsageError("fit_normalization: training cases carry no targets");
        const double mean = sum / static_cast<double>(count);
        double sq = 0.0;
        for (const int idx : indices) {
            for (const FieldGrid& fg : cases.at(static_cast<size_t>(idx)).targets) {
                const std::int64_t base = static_cast<std::int64_t>(c) * FieldGrid::kRows *
                                          FieldGrid::kCols;
                for (std::int64_t k = 0; k < FieldGrid::kRows * FieldGrid::kCols; ++k) {
                    const double d = fg.data[static_cast<size_t>(base + k)] - mean;
                    sq += d * d;
                }
            }
        }
        const double var = sq / static_cast<double>(count);
        const double stdev = std::sqrt(var);
        norm.mean[static_cast<size_t>(c)] = mean;
        norm.stdev[static_cast<size_t>(c)] = stdev < 1e-12 ? 1.0 : stdev;
    }
    return norm;
}

Dataset Dataset::make(std::vector<PanelCase> cases, std::uint64_t split_seed,
                      double train_frac, double val_frac, double test_frac) {
    Dataset ds;
    ds.cases = std::move(cases);
    ds.split = split_dataset(static_cast<int>(ds.cases.size()), train_frac, val_frac,
                             test_frac, split_seed);
    ds.norm = fit_normalization(ds.cases, ds.split.train);
    return ds;
}

Tensor channel_block(const Tensor& tm, Channel c) {
    const std::int64_t grid = FieldGrid::kRows * FieldGrid::kCols;
    if (tm.rank() != 2 || tm.cols() != static_cast<std::int64_t>(kNumChannels) * grid) {
        throw UsageError("channel_block: expected [n x 800] target matrix, got " +
                         tm.shape_str());
    }
    Tensor out({tm.rows(), grid});
    const std::int64_t base = static_cast<std::int64_t>(c) * grid;
    for (std::int64_t r = 0; r < tm.rows(); ++r) {
        for (std::int64_t k = 0; k < grid; ++k) {
            out.at(r, k) = tm.at(r, base + k);
        }
    }
    return out;
}

GraphSet::GraphSet(const std::vector<PanelCase>& cases, Variant variant) : variant_(variant) {
    graphs_.reserve(cases.size());
    targets_.reserve(cases.size());
    for (const PanelCase& pc : cases) {
        if (pc.targets.empty()) {
            throw UsageError("GraphSet: case without solved targets");
        }
        graphs_.push_back(build_variant(pc, variant));
        targets_.push_back(target_matrix(pc));
    }
}

const RelationCatalog& GraphSet::catalog() const {
    if (graphs_.empty()) throw UsageError("GraphSet: empty");
    return graphs_.front().catalog;
}

HeteroGraph GraphSet::merged(const std::vector<int>& indices) const {
    if (indices.empty()) throw UsageError("GraphSet::merged: empty index list");
    std::vector<const HeteroGraph*> ptrs;
    ptrs.reserve(indices.size());
    for (const int i : indices) ptrs.push_back(&graph(i));
    return merge_graphs(ptrs);
}

Tensor GraphSet::merged_targets(const std::vector<int>& indices, Channel c) const {
    if (indices.empty()) throw UsageError("GraphSet::merged_targets: empty index list");
    const std::int64_t grid = FieldGrid::kRows * FieldGrid::kCols;
    std::int64_t rows = 0;
    for (const int i : indices) rows += target_matrix_of(i).rows();
    Tensor out({rows, grid});
    std::int64_t at_row = 0;
    for (const int i : indices) {
        const Tensor& tm = target_matrix_of(i);
        const std::int64_t base = static_cast<std::int64_t>(c) * grid;
        for (std::int64_t r = 0; r < tm.rows(); ++r, ++at_row) {
            for (std::int64_t k = 0; k < grid; ++k) {
                out.at(at_row, k) = tm.at(r, base + k);
            }
        }
    }
    return out;
}

}  // namespace hetpanel
