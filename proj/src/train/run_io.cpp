#include "hetpanel/train/run_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hetpanel/core/error.hpp"
#include "json.hpp"

namespace hetpanel {

namespace fs = std::filesystem;

void ensure_run_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw FormatError("cannot create run directory '" + dir + "'");
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write '" + tmp + "'");
        out << content;
        if (!out) {
            out.close();
            std::remove(tmp.c_str());
            throw FormatError("short write to '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw FormatError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string curves_csv(const RunMetrics& m) {
    std::ostringstream out;
    out << "epoch,train_rmse,val_rmse\n";
    for (size_t e = 0; e < m.train_rmse.size(); ++e) {
        out << (e + 1) << ',' << format_double(m.train_rmse[e]) << ','
            << format_double(m.val_rmse[e]) << '\n';
    }
    return out.str();
}

std::string metrics_json(const TrainConfig& cfg, const RunMetrics& m) {
    nlohmann::ordered_json j;
    j["config"]["layers"] = cfg.network.layers;
    j["config"]["hidden"] = cfg.network.hidden;
    j["config"]["heads"] = cfg.network.heads;
    j["config"]["activation"] = cfg.network.activation;
    j["config"]["lr"] = cfg.network.lr;
    j["config"]["batch_size"] = cfg.network.batch_size;
    j["config"]["l2"] = cfg.network.l2;
    j["config"]["epochs"] = cfg.epochs;
    j["config"]["seed"] = cfg.seed;
    j["config"]["channel"] = channel_name(cfg.channel);
    j["config"]["variant"] = variant_name(cfg.variant);
    j["parameter_count"] = m.parameter_count;
    j["best_epoch"] = m.best_epoch;
    j["best_val_rmse"] = m.best_val_rmse;
    j["final_val_rmse"] = m.val_rmse.empty() ? 0.0 : m.val_rmse.back();
    j["final_train_rmse"] = m.train_rmse.empty() ? 0.0 : m.train_rmse.back();
    j["final_test_rmse"] = m.final_test_rmse;
    j["wall_seconds"] = m.wall_seconds;
    return j.dump(2) + "\n";
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
    std::ostringstream out;
    out << "variant,param_count,rmse_mean,rmse_std,pct_from_best\n";
    for (const AblationRow& r : rows) {
        out << variant_name(r.variant) << ',' << r.param_count << ','
            << format_double(r.rmse_mean) << ',' << format_double(r.rmse_std) << ','
            << format_double(r.pct_from_best) << '\n';
    }
    return out.str();
}

std::string compare_csv(const CompareResult& result) {
    std::ostringstream out;
    out << "model,param_count,rmse_mean,rmse_std\n";
    for (const CompareSide* side : {&result.hgt, &result.sage}) {
        out << side->label << ',' << side->param_count << ','
            << format_double(side->rmse_mean) << ',' << format_double(side->rmse_std) << '\n';
    }
    return out.str();
}

std::string search_csv(const std::vector<SearchRow>& rows) {
    std::ostringstream out;
    out << "lr,layers,hidden,l2,val_rmse,test_rmse\n";
    for (const SearchRow& r : rows) {
        out << format_double(r.network.lr) << ',' << r.network.layers << ','
            << r.network.hidden << ',' << format_double(r.network.l2) << ','
            << format_double(r.val_rmse) << ',' << format_double(r.test_rmse) << '\n';
    }
    return out.str();
}

std::string datasize_csv(const std::vector<DataSizeRow>& rows) {
    std::ostringstream out;
    out << "train_size,rmse_mean,rmse_std\n";
    for (const DataSizeRow& r : rows) {
        out << r.train_size << ',' << format_double(r.rmse_mean) << ','
            << format_double(r.rmse_std) << '\n';
    }
    return out.str();
}

}  // namespace hetpanel
