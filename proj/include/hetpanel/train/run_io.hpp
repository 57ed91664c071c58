#pragma once

#include <string>

#include "hetpanel/io/config.hpp"
#include "hetpanel/train/experiments.hpp"
#include "hetpanel/train/trainer.hpp"

namespace hetpanel {

/// Creates `dir` (and parents); failure throws a FormatError.
void ensure_run_dir(const std::string& dir);

/// Writes `content` to `path` atomically.
void write_text_file(const std::string& path, const std::string& content);

/// "epoch,train_rmse,val_rmse" rows, doubles at full round-trip precision
/// so identical runs produce byte-identical files.
std::string curves_csv(const RunMetrics& m);

/// JSON document with the run's summary metrics and configuration echo.
std::string metrics_json(const TrainConfig& cfg, const RunMetrics& m);

/// Ablation table: variant,param_count,rmse_mean,rmse_std,pct_from_best.
std::string ablation_csv(const std::vector<AblationRow>& rows);

/// Comparison table: model,param_count,rmse_mean,rmse_std.
std::string compare_csv(const CompareResult& result);

/// Parallel-coordinates table: lr,layers,hidden,l2,val_rmse,test_rmse.
std::string search_csv(const std::vector<SearchRow>& rows);

/// Data-size table: train_size,rmse_mean,rmse_std.
std::string datasize_csv(const std::vector<DataSizeRow>& rows);

/// Full-precision decimal rendering of a double (round-trips at 64-bit).
std::string format_double(double v);

}  // namespace hetpanel
