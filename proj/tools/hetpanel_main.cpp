// hetpanel: command-line front end for dataset generation, training,
// experiment protocols and plot-data export.
//
// Exit codes: 0 success, 1 usage, 2 data/format, 3 numeric fault.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"
#include "hetpanel/io/checkpoint.hpp"
#include "hetpanel/io/config.hpp"
#include "hetpanel/io/dataset_io.hpp"
#include "hetpanel/nn/model.hpp"
#include "hetpanel/oracle/grillage.hpp"
#include "hetpanel/train/data.hpp"
#include "hetpanel/train/experiments.hpp"
#include "hetpanel/train/run_io.hpp"
#include "hetpanel/train/trainer.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace hetpanel;

namespace {

std::string data_root() {
    const char* env = std::getenv("HETPANEL_DATA_DIR");
    return (env != nullptr && *env != '\0') ? std::string(env) : std::string(".");
}

std::string default_dataset_path() { return (fs::path(data_root()) / "dataset.hpds").string(); }

std::string default_out(const std::string& name) {
    return (fs::path(data_root()) / name).string();
}

RunConfig load_effective_config(const std::string& config_path) {
    if (config_path.empty()) return RunConfig{};
    if (!fs::exists(config_path)) {
        throw UsageError("config file not found: '" + config_path + "'");
    }
    return load_config(config_path);
}

Dataset open_dataset(const std::string& path, std::uint64_t seed) {
    if (!fs::exists(path)) {
        throw UsageError("dataset archive not found: '" + path + "'");
    }
    std::vector<PanelCase> cases = load_dataset(path);
    if (cases.empty()) {
        throw UsageError("dataset archive '" + path + "' holds no records");
    }
    return Dataset::make(std::move(cases), Rng::derive(seed, "split"));
}

/// Shared option values for the training-family commands.
struct CommonOpts {
    std::string dataset_path = default_dataset_path();
    std::string config_path;
    std::string out_dir;
    std::string variant_str;
    std::string channel_str;
    std::uint64_t seed = 0;
    int epochs = -1;
    int seeds = -1;
};

void add_common(CLI::App* cmd, CommonOpts& o, const std::string& default_dir) {
    cmd->add_option("dataset", o.dataset_path, "HPDS dataset archive")
        ->capture_default_str();
    cmd->add_option("--config", o.config_path, "INI configuration file");
    cmd->add_option("--out", o.out_dir, "run directory")
        ->default_val(default_out(default_dir));
    cmd->add_option("--variant", o.variant_str, "graph variant (a-f, homogeneous)");
    cmd->add_option("--channel", o.channel_str, "target channel (u1, u2, u3, stress)");
    cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
    cmd->add_option("--epochs", o.epochs, "training epochs");
    cmd->add_option("--seeds", o.seeds, "repeat runs per configuration");
}

/// Folds config file + flag overrides into one TrainConfig and the RunConfig
/// echo that reproduces it.
struct Effective {
    TrainConfig train;
    RunConfig echo;
    int n_seeds = 5;
};

Effective resolve(const CommonOpts& o) {
    Effective eff;
    eff.echo = load_effective_config(o.config_path);
    if (!o.variant_str.empty()) eff.echo.train.variant = variant_from_string(o.variant_str);
    if (!o.channel_str.empty()) eff.echo.train.channel = channel_from_string(o.channel_str);
    if (o.epochs > 0) eff.echo.train.epochs = o.epochs;
    if (o.seeds > 0) eff.echo.train.seeds = o.seeds;
    eff.echo.validate();

    eff.train.network = eff.echo.network;
    eff.train.epochs = eff.echo.train.epochs;
    eff.train.seed = o.seed;
    eff.train.channel = eff.echo.train.channel;
    eff.train.variant = eff.echo.train.variant;
    eff.n_seeds = eff.echo.train.seeds;
    return eff;
}

void write_common_outputs(const std::string& dir, const Effective& eff) {
    ensure_run_dir(dir);
    write_text_file((fs::path(dir) / "config.ini").string(), config_to_string(eff.echo));
}

void save_run(const std::string& dir, const TrainConfig& cfg, const TrainResult& res,
              const RelationCatalog& catalog) {
    write_text_file((fs::path(dir) / "curves.csv").string(), curves_csv(res.metrics));
    write_text_file((fs::path(dir) / "metrics.json").string(),
                    metrics_json(cfg, res.metrics));
    CheckpointMeta meta;
    meta.config = cfg.network;
    meta.variant = cfg.variant;
    meta.channel = cfg.channel;
    save_checkpoint((fs::path(dir) / "model.hpck").string(), meta, catalog, *res.store);
}

// ---------------------------------------------------------------- gen ------

struct GenOpts {
    std::string config_path;
    std::string out_path = default_dataset_path();
    int cases = -1;
    std::uint64_t seed = 0;
    int jobs = 1;
    double residual_tol = -1.0;
};

int cmd_gen(const GenOpts& o) {
    RunConfig rc = load_effective_config(o.config_path);
    if (o.cases >= 0) rc.gen.cases = o.cases;
    if (o.residual_tol > 0.0) rc.gen.residual_tol = o.residual_tol;
    rc.validate();
    const int n = rc.gen.cases;
    if (o.jobs < 1) throw UsageError("--jobs must be at least 1");

    SolveOptions solve_opts;
    solve_opts.residual_tol = rc.gen.residual_tol;

    struct Slot {
        bool ok = false;
        PanelCase pc;
    };
    std::vector<Slot> slots(static_cast<size_t>(n));
    std::atomic<int> next{0};
    std::atomic<int> done{0};
    std::atomic<int> failed{0};
    std::mutex log_mutex;
    const int step = std::max(1, n / 10);

    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            const std::uint64_t case_seed =
                Rng::derive(o.seed, "case", static_cast<std::uint64_t>(i));
            try {
                Rng rng(case_seed);
                const PanelGeometry geom = sample_panel(rc.gen.ranges, rng);
                PanelCase pc = synthesize_case(geom, MaterialLaw{}, rc.gen.casegen, rng);
                slots[static_cast<size_t>(i)].pc =
                    solve_case(std::move(pc), rc.gen.mesh, solve_opts);
                slots[static_cast<size_t>(i)].ok = true;
            } catch (const std::exception& e) {
                failed.fetch_add(1);
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "gen: case " << i << " (seed " << case_seed
                          << ") failed: " << e.what() << "; skipped\n";
            }
            const int d = done.fetch_add(1) + 1;
            if (d % step == 0 || d == n) {
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cout << "gen: solved " << d << "/" << n << "\n";
            }
        }
    };
    if (o.jobs == 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min(o.jobs, std::max(1, n)); ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) t.join();
    }

    std::vector<PanelCase> cases;
    cases.reserve(static_cast<size_t>(n));
    for (Slot& s : slots) {
        if (s.ok) cases.push_back(std::move(s.pc));
    }
    const auto parent = std::filesystem::path(o.out_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    save_dataset(cases, o.out_path);
    std::cout << "gen: wrote " << cases.size() << " cases to '" << o.out_path << "' ("
              << failed.load() << " failures)\n";
    if (failed.load() * 100 > n) {
        throw NumericError(std::to_string(failed.load()) + " of " + std::to_string(n) +
                           " cases failed to solve (more than 1%)");
    }
    return 0;
}

// -------------------------------------------------------------- train ------

int cmd_train(const CommonOpts& o) {
    const Effective eff = resolve(o);
    const Dataset ds = open_dataset(o.dataset_path, o.seed);
    const GraphSet graphs(ds.cases, eff.train.variant);
    const TrainResult res = train_run(eff.train, ds, graphs);

    write_common_outputs(o.out_dir, eff);
    save_run(o.out_dir, eff.train, res, graphs.catalog());
    std::cout << "train: best val RMSE " << res.metrics.best_val_rmse << " (epoch "
              << res.metrics.best_epoch << "), test RMSE " << res.metrics.final_test_rmse
              << "\n";
    std::cout << "train: run directory '" << o.out_dir << "'\n";
    return 0;
}

// --------------------------------------------------------------- eval ------

int cmd_eval(const CommonOpts& o, const std::vector<std::string>& checkpoints) {
    if (checkpoints.empty()) {
        throw UsageError("eval needs at least one --checkpoint");
    }
    const Dataset ds = open_dataset(o.dataset_path, o.seed);

    struct Loaded {
        CheckpointMeta meta;
        std::unique_ptr<ParamStore> store;
        std::unique_ptr<Model> model;
    };
    std::vector<Loaded> models;
    for (const std::string& path : checkpoints) {
        if (!fs::exists(path)) {
            throw UsageError("checkpoint not found: '" + path + "'");
        }
        Loaded l;
        l.meta = peek_checkpoint(path).meta;
        const RelationCatalog cat = catalog_for(l.meta.variant);
        l.store = std::make_unique<ParamStore>();
        Rng rng(0);
        l.model = std::make_unique<Model>(l.meta.config, cat, *l.store, rng);
        load_checkpoint(path, l.meta, cat, *l.store);
        models.push_back(std::move(l));
    }
    const Variant variant = models.front().meta.variant;
    for (const Loaded& l : models) {
        if (l.meta.variant != variant) {
            throw UsageError("eval: all checkpoints must share one variant");
        }
    }
    const GraphSet graphs(ds.cases, variant);
    ensure_run_dir(o.out_dir);

    nlohmann::ordered_json summary;
    const Model* by_channel[kNumChannels] = {nullptr, nullptr, nullptr, nullptr};
    for (const Loaded& l : models) {
        const ChannelEval ev =
            evaluate_channel(*l.model, ds, graphs, ds.split.test, l.meta.channel);
        const std::string name = channel_name(l.meta.channel);
        summary["rmse"][name] = ev.rmse_total;
        by_channel[static_cast<size_t>(l.meta.channel)] = l.model.get();

        std::string csv = "dataset_index,rmse,percentile\n";
        for (size_t k = 0; k < ds.split.test.size(); ++k) {
            csv += std::to_string(ds.split.test[k]) + "," + format_double(ev.record_rmse[k]) +
                   "," + format_double(ev.percentile[k]) + "\n";
        }
        write_text_file((fs::path(o.out_dir) / ("records_" + name + ".csv")).string(), csv);
        std::cout << "eval: " << name << " test RMSE " << ev.rmse_total << "\n";
    }
    if (by_channel[0] != nullptr && by_channel[1] != nullptr && by_channel[2] != nullptr) {
        const ChannelEval total = evaluate_total_displacement(
            *by_channel[0], *by_channel[1], *by_channel[2], ds, graphs, ds.split.test);
        summary["rmse"]["total_displacement"] = total.rmse_total;
        std::string csv = "dataset_index,rmse,percentile\n";
        for (size_t k = 0; k < ds.split.test.size(); ++k) {
            csv += std::to_string(ds.split.test[k]) + "," +
                   format_double(total.record_rmse[k]) + "," +
                   format_double(total.percentile[k]) + "\n";
        }
        write_text_file((fs::path(o.out_dir) / "records_total_displacement.csv").string(),
                        csv);
        std::cout << "eval: total displacement test RMSE " << total.rmse_total << "\n";
    }
    summary["test_records"] = ds.split.test.size();
    summary["seed"] = o.seed;
    write_text_file((fs::path(o.out_dir) / "eval.json").string(), summary.dump(2) + "\n");
    std::cout << "eval: run directory '" << o.out_dir << "'\n";
    return 0;
}

// ------------------------------------------------------------- ablate ------

int cmd_ablate(const CommonOpts& o, const std::string& variants_arg) {
    const Effective eff = resolve(o);
    const Dataset ds = open_dataset(o.dataset_path, o.seed);

    std::vector<Variant> variants;
    std::string token;
    std::stringstream stream(variants_arg);
    while (std::getline(stream, token, ',')) {
        if (!token.empty()) variants.push_back(variant_from_string(token));
    }
    if (variants.empty()) throw UsageError("--variants lists no variants");

    const std::vector<AblationRow> rows = ablation_run(ds, variants, eff.train, eff.n_seeds);
    write_common_outputs(o.out_dir, eff);
    write_text_file((fs::path(o.out_dir) / "ablation.csv").string(), ablation_csv(rows));

    nlohmann::ordered_json j;
    const AblationRow* best = &rows.front();
    for (const AblationRow& r : rows) {
        if (r.rmse_mean < best->rmse_mean) best = &r;
        nlohmann::ordered_json row;
        row["variant"] = variant_name(r.variant);
        row["param_count"] = r.param_count;
        row["rmse_mean"] = r.rmse_mean;
        row["rmse_std"] = r.rmse_std;
        row["pct_from_best"] = r.pct_from_best;
        j["rows"].push_back(row);
    }
    j["seeds"] = eff.n_seeds;
    j["best_variant"] = variant_name(best->variant);
    write_text_file((fs::path(o.out_dir) / "metrics.json").string(), j.dump(2) + "\n");

    // Refit the winning variant (first repeat seed) for the retained
    // checkpoint; this reproduces the experiment's own run bit for bit.
    TrainConfig cfg = eff.train;
    cfg.variant = best->variant;
    cfg.seed = run_seed(eff.train.seed, 0);
    const GraphSet graphs(ds.cases, cfg.variant);
    const TrainResult res = train_run(cfg, ds, graphs);
    save_run(o.out_dir, cfg, res, graphs.catalog());

    std::cout << ablation_csv(rows);
    std::cout << "ablate: best variant " << variant_name(best->variant) << ", run directory '"
              << o.out_dir << "'\n";
    return 0;
}

// ------------------------------------------------------------ compare ------

int cmd_compare(const CommonOpts& o) {
    const Effective eff = resolve(o);
    const Dataset ds = open_dataset(o.dataset_path, o.seed);
    const CompareResult result = compare_homo_hetero(ds, eff.train, eff.n_seeds);

    write_common_outputs(o.out_dir, eff);
    write_text_file((fs::path(o.out_dir) / "compare.csv").string(), compare_csv(result));
    for (const CompareSide* side : {&result.hgt, &result.sage}) {
        for (size_t k = 0; k < side->runs.size(); ++k) {
            write_text_file((fs::path(o.out_dir) /
                             ("curves_" + side->label + "_seed" + std::to_string(k) + ".csv"))
                                .string(),
                            curves_csv(side->runs[k]));
        }
    }
    nlohmann::ordered_json j;
    for (const CompareSide* side : {&result.hgt, &result.sage}) {
        j[side->label]["param_count"] = side->param_count;
        j[side->label]["rmse_mean"] = side->rmse_mean;
        j[side->label]["rmse_std"] = side->rmse_std;
    }
    j["seeds"] = eff.n_seeds;
    write_text_file((fs::path(o.out_dir) / "metrics.json").string(), j.dump(2) + "\n");

    const bool hgt_wins = result.hgt.rmse_mean <= result.sage.rmse_mean;
    TrainConfig cfg = eff.train;
    cfg.variant = hgt_wins ? Variant::d : Variant::homogeneous;
    cfg.seed = run_seed(eff.train.seed, 0);
    const GraphSet graphs(ds.cases, cfg.variant);
    const TrainResult res = train_run(cfg, ds, graphs);
    save_run(o.out_dir, cfg, res, graphs.catalog());

    std::cout << compare_csv(result);
    std::cout << "compare: run directory '" << o.out_dir << "'\n";
    return 0;
}

// ----------------------------------------------------------- hpsearch ------

int cmd_hpsearch(const CommonOpts& o, int budget, std::uint64_t scramble_seed) {
    const Effective eff = resolve(o);
    const Dataset ds = open_dataset(o.dataset_path, o.seed);
    SearchSpace space;
    const std::vector<SearchRow> rows =
        quasi_random_search(space, budget, ds, eff.train, scramble_seed);

    write_common_outputs(o.out_dir, eff);
    write_text_file((fs::path(o.out_dir) / "search.csv").string(), search_csv(rows));
    nlohmann::ordered_json j;
    j["budget"] = budget;
    j["scramble_seed"] = scramble_seed;
    j["best"]["lr"] = rows.front().network.lr;
    j["best"]["layers"] = rows.front().network.layers;
    j["best"]["hidden"] = rows.front().network.hidden;
    j["best"]["l2"] = rows.front().network.l2;
    j["best"]["val_rmse"] = rows.front().val_rmse;
    j["best"]["test_rmse"] = rows.front().test_rmse;
    write_text_file((fs::path(o.out_dir) / "metrics.json").string(), j.dump(2) + "\n");

    TrainConfig cfg = eff.train;
    cfg.network = rows.front().network;
    cfg.seed = Rng::derive(eff.train.seed, "search");
    const GraphSet graphs(ds.cases, cfg.variant);
    const TrainResult res = train_run(cfg, ds, graphs);
    save_run(o.out_dir, cfg, res, graphs.catalog());

    std::cout << search_csv(rows);
    std::cout << "hpsearch: run directory '" << o.out_dir << "'\n";
    return 0;
}

// ----------------------------------------------------------- datasize ------

int cmd_datasize(const CommonOpts& o, std::string sizes_arg) {
    const Effective eff = resolve(o);
    const Dataset ds = open_dataset(o.dataset_path, o.seed);

    std::vector<int> sizes;
    if (sizes_arg.empty()) {
        for (const int s : {1600, 800, 400, 200, 100}) {
            if (s <= static_cast<int>(ds.split.train.size())) sizes.push_back(s);
        }
        if (sizes.empty()) sizes.push_back(static_cast<int>(ds.split.train.size()));
    } else {
        std::string token;
        std::stringstream stream(sizes_arg);
        while (std::getline(stream, token, ',')) {
            if (token.empty()) continue;
            try {
                sizes.push_back(std::stoi(token));
            } catch (const std::exception&) {
                throw UsageError("--sizes: '" + token + "' is not an integer");
            }
        }
    }
    const std::vector<DataSizeRow> rows = data_size_study(ds, sizes, eff.train, eff.n_seeds);

    write_common_outputs(o.out_dir, eff);
    write_text_file((fs::path(o.out_dir) / "datasize.csv").string(), datasize_csv(rows));
    nlohmann::ordered_json j;
    j["seeds"] = eff.n_seeds;
    for (const DataSizeRow& r : rows) {
        nlohmann::ordered_json row;
        row["train_size"] = r.train_size;
        row["rmse_mean"] = r.rmse_mean;
        row["rmse_std"] = r.rmse_std;
        j["rows"].push_back(row);
    }
    write_text_file((fs::path(o.out_dir) / "metrics.json").string(), j.dump(2) + "\n");

    // Checkpoint from the largest-size run with the first repeat seed.
    int largest = rows.front().train_size;
    for (const DataSizeRow& r : rows) largest = std::max(largest, r.train_size);
    const std::vector<int> subset(ds.split.train.begin(), ds.split.train.begin() + largest);
    TrainConfig cfg = eff.train;
    cfg.seed = run_seed(eff.train.seed, 0);
    const GraphSet graphs(ds.cases, cfg.variant);
    const TrainResult res = train_run(cfg, ds, graphs, &subset);
    save_run(o.out_dir, cfg, res, graphs.catalog());

    std::cout << datasize_csv(rows);
    std::cout << "datasize: run directory '" << o.out_dir << "'\n";
    return 0;
}

// --------------------------------------------------------------- plot ------

struct PlotOpts {
    std::string dataset_path = default_dataset_path();
    std::string checkpoint;
    std::string out_dir;
    std::uint64_t seed = 0;
    int case_index = 0;
    int unit = 0;
    int row = -1;
    int col = -1;
    std::string edge;
};

int cmd_plot(const PlotOpts& o) {
    if (!fs::exists(o.checkpoint)) {
        throw UsageError("checkpoint not found: '" + o.checkpoint + "'");
    }
    int selectors = (o.row >= 0 ? 1 : 0) + (o.col >= 0 ? 1 : 0) + (o.edge.empty() ? 0 : 1);
    if (selectors != 1) {
        throw UsageError("plot needs exactly one of --row, --col or --edge");
    }
    int row = o.row, col = o.col;
    if (!o.edge.empty()) {
        if (o.edge == "left") col = 0;
        else if (o.edge == "right") col = FieldGrid::kCols - 1;
        else if (o.edge == "bottom") row = 0;
        else if (o.edge == "top") row = FieldGrid::kRows - 1;
        else {
            throw UsageError("unknown edge '" + o.edge +
                             "' (expected left, right, bottom or top)");
        }
    }
    if (row >= FieldGrid::kRows || col >= FieldGrid::kCols) {
        throw UsageError("path index out of range for the " +
                         std::to_string(FieldGrid::kRows) + "x" +
                         std::to_string(FieldGrid::kCols) + " grid");
    }

    const Dataset ds = open_dataset(o.dataset_path, o.seed);
    if (o.case_index < 0 || o.case_index >= ds.size()) {
        throw UsageError("case index " + std::to_string(o.case_index) +
                         " out of range (dataset holds " + std::to_string(ds.size()) +
                         " records)");
    }
    const CheckpointMeta meta = peek_checkpoint(o.checkpoint).meta;
    const RelationCatalog cat = catalog_for(meta.variant);
    ParamStore store;
    Rng rng(0);
    Model model(meta.config, cat, store, rng);
    load_checkpoint(o.checkpoint, meta, cat, store);

    const GraphSet graphs(ds.cases, meta.variant);
    const Tensor pred_all = ds.norm.denormalize_matrix(
        model.predict(graphs.graph(o.case_index)), meta.channel);
    const Tensor truth_all = channel_block(graphs.target_matrix_of(o.case_index),
                                           meta.channel);
    if (o.unit < 0 || o.unit >= pred_all.rows()) {
        throw UsageError("unit " + std::to_string(o.unit) + " out of range (case has " +
                         std::to_string(pred_all.rows()) + " units)");
    }

    const auto grid_at = [&](const Tensor& t, int r, int c) {
        return t.at(o.unit, static_cast<std::int64_t>(r) * FieldGrid::kCols + c);
    };

    ensure_run_dir(o.out_dir);
    // Path table: position in [0,1] along the line, oracle, prediction, error.
    std::string path_csv = "position,oracle,prediction,abs_error\n";
    const int count = row >= 0 ? FieldGrid::kCols : FieldGrid::kRows;
    for (int i = 0; i < count; ++i) {
        const int r = row >= 0 ? row : i;
        const int c = row >= 0 ? i : col;
        const double pos = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        const double t = grid_at(truth_all, r, c);
        const double p = grid_at(pred_all, r, c);
        path_csv += format_double(pos) + "," + format_double(t) + "," + format_double(p) +
                    "," + format_double(std::abs(t - p)) + "\n";
    }
    write_text_file((fs::path(o.out_dir) / "path.csv").string(), path_csv);

    const auto grid_csv = [&](const Tensor& t, bool absolute_error) {
        std::string out;
        for (int r = 0; r < FieldGrid::kRows; ++r) {
            for (int c = 0; c < FieldGrid::kCols; ++c) {
                const double v = absolute_error
                                     ? std::abs(grid_at(truth_all, r, c) - grid_at(pred_all, r, c))
                                     : grid_at(t, r, c);
                out += format_double(v);
                out += c + 1 == FieldGrid::kCols ? '\n' : ',';
            }
        }
        return out;
    };
    write_text_file((fs::path(o.out_dir) / "grid_oracle.csv").string(),
                    grid_csv(truth_all, false));
    write_text_file((fs::path(o.out_dir) / "grid_prediction.csv").string(),
                    grid_csv(pred_all, false));
    write_text_file((fs::path(o.out_dir) / "grid_abs_error.csv").string(),
                    grid_csv(truth_all, true));

    double max_true = grid_at(truth_all, 0, 0);
    double max_pred = grid_at(pred_all, 0, 0);
    for (int r = 0; r < FieldGrid::kRows; ++r) {
        for (int c = 0; c < FieldGrid::kCols; ++c) {
            max_true = std::max(max_true, grid_at(truth_all, r, c));
            max_pred = std::max(max_pred, grid_at(pred_all, r, c));
        }
    }
    const double denom = std::max(std::abs(max_true), 1e-12);
    const double accuracy = 1.0 - std::abs(max_pred - max_true) / denom;
    nlohmann::ordered_json j;
    j["case"] = o.case_index;
    j["unit"] = o.unit;
    j["channel"] = channel_name(meta.channel);
    j["max_oracle"] = max_true;
    j["max_prediction"] = max_pred;
    j["max_value_accuracy_percent"] = 100.0 * accuracy;
    write_text_file((fs::path(o.out_dir) / "accuracy.json").string(), j.dump(2) + "\n");

    std::cout << "plot: max-value accuracy " << 100.0 * accuracy << "% (unit " << o.unit
              << ", channel " << channel_name(meta.channel) << ")\n";
    std::cout << "plot: run directory '" << o.out_dir << "'\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hetpanel: stiffened-panel response surrogates on typed graphs"};
    app.require_subcommand(1);

    GenOpts gen_opts;
    CLI::App* gen = app.add_subcommand("gen", "sample and solve cases into an HPDS archive");
    gen->add_option("-n,--cases", gen_opts.cases, "number of cases");
    gen->add_option("--config", gen_opts.config_path, "INI configuration file");
    gen->add_option("--out", gen_opts.out_path, "output archive path")->capture_default_str();
    gen->add_option("--seed", gen_opts.seed, "master seed")->capture_default_str();
    gen->add_option("--jobs", gen_opts.jobs, "worker threads")->capture_default_str();
    gen->add_option("--residual-tol", gen_opts.residual_tol, "solver residual tolerance");

    CommonOpts train_opts;
    CLI::App* train = app.add_subcommand("train", "train one network");
    add_common(train, train_opts, "run-train");

    CommonOpts eval_opts;
    std::vector<std::string> eval_checkpoints;
    CLI::App* eval = app.add_subcommand("eval", "evaluate checkpoints on the test split");
    add_common(eval, eval_opts, "run-eval");
    eval->add_option("--checkpoint", eval_checkpoints, "HPCK checkpoint (repeatable)");

    CommonOpts ablate_opts;
    std::string variants_arg = "a,b,c,d,e,f";
    CLI::App* ablate = app.add_subcommand("ablate", "heterogeneity ablation table");
    add_common(ablate, ablate_opts, "run-ablate");
    ablate->add_option("--variants", variants_arg, "comma-separated variant letters")
        ->capture_default_str();

    CommonOpts compare_opts;
    CLI::App* compare = app.add_subcommand("compare", "homogeneous vs heterogeneous");
    add_common(compare, compare_opts, "run-compare");

    CommonOpts hp_opts;
    int budget = 8;
    std::uint64_t scramble_seed = 0;
    CLI::App* hpsearch = app.add_subcommand("hpsearch", "quasi-random hyperparameter search");
    add_common(hpsearch, hp_opts, "run-hpsearch");
    hpsearch->add_option("--budget", budget, "configurations to try")->capture_default_str();
    hpsearch->add_option("--scramble-seed", scramble_seed, "sequence scramble seed")
        ->capture_default_str();

    CommonOpts ds_opts;
    std::string sizes_arg;
    CLI::App* datasize = app.add_subcommand("datasize", "training-set size study");
    add_common(datasize, ds_opts, "run-datasize");
    datasize->add_option("--sizes", sizes_arg, "comma-separated training sizes");

    PlotOpts plot_opts;
    CLI::App* plot = app.add_subcommand("plot", "export plot tables for one case");
    plot->add_option("dataset", plot_opts.dataset_path, "HPDS dataset archive")
        ->capture_default_str();
    plot->add_option("--checkpoint", plot_opts.checkpoint, "HPCK checkpoint")->required();
    plot->add_option("--out", plot_opts.out_dir, "output directory")
        ->default_val(default_out("run-plot"));
    plot->add_option("--seed", plot_opts.seed, "split seed")->capture_default_str();
    plot->add_option("--case", plot_opts.case_index, "record index")->capture_default_str();
    plot->add_option("--unit", plot_opts.unit, "structural unit id")->capture_default_str();
    plot->add_option("--row", plot_opts.row, "grid row for a lengthwise path");
    plot->add_option("--col", plot_opts.col, "grid column for a crosswise path");
    plot->add_option("--edge", plot_opts.edge, "edge path: left, right, bottom, top");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_gen(gen_opts);
        if (train->parsed()) return cmd_train(train_opts);
        if (eval->parsed()) return cmd_eval(eval_opts, eval_checkpoints);
        if (ablate->parsed()) return cmd_ablate(ablate_opts, variants_arg);
        if (compare->parsed()) return cmd_compare(compare_opts);
        if (hpsearch->parsed()) return cmd_hpsearch(hp_opts, budget, scramble_seed);
        if (datasize->parsed()) return cmd_datasize(ds_opts, sizes_arg);
        if (plot->parsed()) return cmd_plot(plot_opts);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
