// Acceptance harness: exercises the eleven shipped acceptance criteria and
// prints one PASS/FAIL line per criterion.  Exit code 0 iff all pass.
//
// The training-based criteria (8, 9, 11) run a desk-scale protocol: a
// 400-case oracle dataset for the heterogeneous-vs-homogeneous comparison
// and the data-size study, and a 40-case smoke dataset for the
// default-configuration sanity run.  Everything is seeded and deterministic.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hetpanel/core/error.hpp"
#include "hetpanel/core/rng.hpp"
#include "hetpanel/graph/graph.hpp"
#include "hetpanel/io/checkpoint.hpp"
#include "hetpanel/io/dataset_io.hpp"
#include "hetpanel/nn/model.hpp"
#include "hetpanel/nn/tape.hpp"
#include "hetpanel/oracle/grillage.hpp"
#include "hetpanel/panel/material.hpp"
#include "hetpanel/train/data.hpp"
#include "hetpanel/train/experiments.hpp"
#include "hetpanel/train/trainer.hpp"

namespace fs = std::filesystem;
using namespace hetpanel;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int id, bool pass, const std::string& detail, double secs) {
    if (!pass) ++g_failures;
    std::printf("[%2d/11] %s  %s (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(),
                secs);
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

PanelCase sampled_case(std::uint64_t seed, int n_stiffeners) {
    GeometryRanges ranges;
    ranges.n_stiffeners_min = n_stiffeners;
    ranges.n_stiffeners_max = n_stiffeners;
    Rng rng(seed);
    const PanelGeometry geom = sample_panel(ranges, rng);
    return synthesize_case(geom, MaterialLaw{}, CaseGenConfig{}, rng);
}

double model_loss(const Model& model, const HeteroGraph& g, const Tensor& target) {
    Tape tape(&model.store());
    const int pred = model.forward(tape, g, /*training=*/true);
    return tape.scalar(tape.rmse_loss(pred, target));
}

Tensor random_target(std::int64_t rows, std::int64_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Tensor t({rows, cols});
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = rng.normal();
    return t;
}

/// Narrow flat plate acting as a simply supported beam (both short edges
/// pinned).  The load profile is set by the caller.
PanelCase beam_case() {
    PanelGeometry g;
    g.length_m = 3.0;
    g.width_m = 0.3;
    g.plate_thickness_mm = 15.0;
    g.web_thickness_mm = 10.0;
    g.web_height_mm = 250.0;
    g.flange_thickness_mm = 12.0;
    g.flange_width_mm = 100.0;
    g.n_stiffeners = 0;

    PanelCase pc;
    pc.geometry = g;
    pc.material = MaterialLaw{};
    const auto units = structural_units(g);
    for (const auto& e : physical_edges(units)) {
        EdgeBC bc;
        bc.edge_id = e.id;
        if (e.orientation == Axis::Y) bc.known[0] = bc.known[1] = bc.known[2] = true;
        pc.edge_bcs.push_back(bc);
    }
    for (const auto& u : units) {
        LoadProfile lp;
        lp.unit_id = u.id;
        pc.loads.push_back(lp);
    }
    return pc;
}

/// Generates `n` solved cases (default ranges and generator knobs) and
/// records the worst solver residual seen.
std::vector<PanelCase> generate_cases(int n, std::uint64_t seed, double* max_residual) {
    std::vector<PanelCase> cases;
    cases.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rng rng(Rng::derive(seed, "case", static_cast<std::uint64_t>(i)));
        const PanelGeometry geom = sample_panel(GeometryRanges{}, rng);
        PanelCase pc = synthesize_case(geom, MaterialLaw{}, CaseGenConfig{}, rng);
        const GrillageModel model(pc, GrillageMesh{});
        const GrillageSolution sol = solve_static(model);
        if (max_residual != nullptr) *max_residual = std::max(*max_residual, sol.residual_rel);
        pc.targets = extract_fields(model, sol);
        cases.push_back(std::move(pc));
    }
    return cases;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ------------------------------------------------------------------------
// 1. Attention normalization over 100 random graphs across all variants.
// ------------------------------------------------------------------------
void criterion_1() {
    const auto t0 = Clock::now();
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;
    const std::array<Variant, 6> variants = {Variant::a, Variant::b, Variant::c,
                                             Variant::d, Variant::e, Variant::f};
    std::vector<std::unique_ptr<ParamStore>> stores;
    std::vector<std::unique_ptr<Model>> models;
    for (size_t k = 0; k < variants.size(); ++k) {
        stores.push_back(std::make_unique<ParamStore>());
        Rng rng(100 + k);
        models.push_back(
            std::make_unique<Model>(cfg, catalog_for(variants[k]), *stores.back(), rng));
    }

    double max_dev = 0.0;
    long targets_checked = 0;
    for (int i = 0; i < 100; ++i) {
        const Variant v = variants[static_cast<size_t>(i) % variants.size()];
        const PanelCase pc =
            sampled_case(Rng::derive(781, "att", static_cast<std::uint64_t>(i)), 1 + i % 4);
        const HeteroGraph g = build_variant(pc, v);
        const Model& model = *models[static_cast<size_t>(i) % variants.size()];
        std::vector<std::vector<AttentionRecord>> records;
        Tape tape(&model.store());
        model.forward(tape, g, /*training=*/false, &records);
        for (const auto& layer : records) {
            for (const AttentionRecord& rec : layer) {
                std::map<std::int32_t, std::vector<double>> sums;
                for (std::int64_t r = 0; r < rec.alpha.rows(); ++r) {
                    auto& acc = sums[rec.target[static_cast<size_t>(r)]];
                    acc.resize(static_cast<size_t>(rec.alpha.cols()), 0.0);
                    for (std::int64_t c = 0; c < rec.alpha.cols(); ++c) {
                        acc[static_cast<size_t>(c)] += rec.alpha.at(r, c);
                    }
                }
                for (const auto& [target, acc] : sums) {
                    (void)target;
                    ++targets_checked;
                    for (const double s : acc) max_dev = std::max(max_dev, std::abs(s - 1.0));
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    const bool pass = max_dev < 1e-6 && secs < 60.0;
    report(1, pass,
           "attention normalization: max |sum-1| = " + fmt(max_dev) + " over 100 graphs, 6 variants, " +
               std::to_string(targets_checked) + " (target,head) groups",
           secs);
}

// ------------------------------------------------------------------------
// 2. Full-network loss gradients vs central finite differences.
// ------------------------------------------------------------------------
void criterion_2() {
    const auto t0 = Clock::now();
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 8;
    cfg.heads = 2;

    struct Toy {
        Variant variant;
        std::uint64_t case_seed, init_seed, target_seed, probe_seed;
    };
    const std::array<Toy, 3> toys = {Toy{Variant::e, 903, 21, 31, 41},
                                     Toy{Variant::c, 904, 22, 32, 42},
                                     Toy{Variant::homogeneous, 905, 23, 33, 43}};

    bool all_ok = true;
    double worst_abs = 0.0;
    long probes = 0;
    const double step = 1e-5;
    for (const Toy& toy : toys) {
        const PanelCase pc = sampled_case(toy.case_seed, 1);
        const HeteroGraph g = build_variant(pc, toy.variant);
        ParamStore store;
        Rng init(toy.init_seed);
        const Model model(cfg, catalog_for(toy.variant), store, init);
        const Tensor target =
            random_target(g.n_nodes(model.output_type()), 200, toy.target_seed);

        store.zero_grads();
        Tape tape(&store);
        tape.backward(tape.rmse_loss(model.forward(tape, g, /*training=*/true), target));

        Rng rng(toy.probe_seed);
        for (int pid = 0; pid < store.count(); ++pid) {
            const std::int64_t n = store.value(pid).numel();
            const std::int64_t count = std::min<std::int64_t>(n, 10);
            for (std::int64_t p = 0; p < count; ++p) {
                const std::int64_t k =
                    static_cast<std::int64_t>(rng.uniform_index(static_cast<std::uint64_t>(n)));
                const double saved = store.value(pid)[k];
                store.value(pid)[k] = saved + step;
                const double lp = model_loss(model, g, target);
                store.value(pid)[k] = saved - step;
                const double lm = model_loss(model, g, target);
                store.value(pid)[k] = saved;
                const double fd = (lp - lm) / (2.0 * step);
                const double an = store.grad(pid)[k];
                const double tol = std::max(1e-7, 1e-4 * std::max(std::abs(fd), std::abs(an)));
                worst_abs = std::max(worst_abs, std::abs(fd - an) / std::max(tol, 1e-300));
                all_ok = all_ok && std::abs(fd - an) <= tol;
                ++probes;
            }
        }
    }
    const double secs = seconds_since(t0);
    const bool pass = all_ok && secs < 300.0;
    report(2, pass,
           "gradient check: " + std::to_string(probes) +
               " probes on 3 toy graphs, worst |fd-grad|/tol = " + fmt(worst_abs),
           secs);
}

// ------------------------------------------------------------------------
// 3. Permutation equivariance for every variant.
// ------------------------------------------------------------------------
void criterion_3() {
    const auto t0 = Clock::now();
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.hidden = 16;
    cfg.heads = 4;

    double worst = 0.0;
    for (const Variant v : {Variant::a, Variant::b, Variant::c, Variant::d, Variant::e,
                            Variant::f, Variant::homogeneous}) {
        const PanelCase pc = sampled_case(902 + static_cast<std::uint64_t>(v), 2);
        const HeteroGraph g = build_variant(pc, v);
        ParamStore store;
        Rng rng(11);
        const Model model(cfg, catalog_for(v), store, rng);

        // Reverse every node type's order, remapping features, masks and
        // link endpoints (link storage order preserved).
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
                    f.at(map[static_cast<size_t>(i)], c) =
                        g.features[static_cast<size_t>(t)].at(i, c);
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
                perm.links[r].src[l] = maps[static_cast<size_t>(rel.src_type)]
                                           [static_cast<size_t>(g.links[r].src[l])];
                perm.links[r].dst[l] = maps[static_cast<size_t>(rel.dst_type)]
                                           [static_cast<size_t>(g.links[r].dst[l])];
            }
        }

        const Tensor base = model.predict(g);
        const Tensor moved = model.predict(perm);
        const auto& out_map = maps[static_cast<size_t>(model.output_type())];
        for (std::int64_t i = 0; i < base.rows(); ++i) {
            for (std::int64_t c = 0; c < base.cols(); ++c) {
                worst = std::max(worst, std::abs(base.at(i, c) -
                                                 moved.at(out_map[static_cast<size_t>(i)], c)));
            }
        }
    }
    report(3, worst <= 1e-12,
           "permutation equivariance: max |diff| = " + fmt(worst) + " over 7 variants",
           seconds_since(t0));
}

// ------------------------------------------------------------------------
// 4. Parameter-count ordering and variant (e) spatial relation count.
// ------------------------------------------------------------------------
void criterion_4() {
    const auto t0 = Clock::now();
    const NetworkConfig cfg;  // reference defaults
    std::map<Variant, std::int64_t> counts;
    for (const Variant v : {Variant::a, Variant::b, Variant::c, Variant::d, Variant::e,
                            Variant::f}) {
        counts[v] = count_parameters(cfg, catalog_for(v));
    }
    const bool order_ok = counts[Variant::e] < counts[Variant::f] &&
                          counts[Variant::f] < counts[Variant::c] &&
                          counts[Variant::c] < counts[Variant::d] &&
                          counts[Variant::d] < counts[Variant::a] &&
                          counts[Variant::a] < counts[Variant::b];

    const RelationCatalog cat = catalog_for(Variant::e);
    const int geometry = cat.node_type_index("geometry");
    const int boundary = cat.node_type_index("boundary_combined");
    int spatial_fwd = 0, spatial_rev = 0;
    bool endpoints_ok = true;
    for (const RelationInfo& rel : cat.relations) {
        if (rel.spatial_code < 0) continue;
        (rel.reverse ? spatial_rev : spatial_fwd) += 1;
        const bool gb = rel.src_type == geometry && rel.dst_type == boundary;
        const bool bg = rel.src_type == boundary && rel.dst_type == geometry;
        endpoints_ok = endpoints_ok && (gb || bg);
    }
    const bool spatial_ok = spatial_fwd == 12 && spatial_rev == 12 && endpoints_ok;

    std::string detail = "parameter counts e<f<c<d<a<b (";
    for (const Variant v : {Variant::e, Variant::f, Variant::c, Variant::d, Variant::a,
                            Variant::b}) {
        detail += std::to_string(counts[v]) + (v == Variant::b ? ")" : " < ");
    }
    detail += ", variant e spatial kinds fwd/rev = " + std::to_string(spatial_fwd) + "/" +
              std::to_string(spatial_rev);
    report(4, order_ok && spatial_ok, detail, seconds_since(t0));
}

// ------------------------------------------------------------------------
// 5. Material law: continuity, exact yield value, reference strain.
// ------------------------------------------------------------------------
void criterion_5() {
    const auto t0 = Clock::now();
    const MaterialLaw law;
    const double at_plateau = flow_stress(law, law.plateau_strain);
    const double above = flow_stress(law, law.plateau_strain + 1e-12);
    const double jump = std::abs(above - at_plateau) / law.yield_stress_pa;
    const bool continuous = jump <= 1e-9;

    const bool exact_yield = flow_stress(law, 0.0) == 355e6;

    // Independent evaluation of the reference strain through exp/log rather
    // than the library's pow-based route.
    const double independent =
        std::exp(std::log(law.yield_stress_pa / law.hardening_coeff_pa) /
                 law.hardening_exponent) -
        law.plateau_strain;
    const double e0_diff = std::abs(ref_strain(law) - independent);
    const bool e0_ok = e0_diff <= 1e-12;

    report(5, continuous && exact_yield && e0_ok,
           "material law: plateau jump " + fmt(jump) + " rel, sigma_f(0) exact " +
               (exact_yield ? "yes" : "NO") + ", eps0 diff " + fmt(e0_diff),
           seconds_since(t0));
}

// ------------------------------------------------------------------------
// 6. Oracle physics: beam benchmark, linearity, symmetry, residuals.
// ------------------------------------------------------------------------
struct SharedDatasets {
    std::vector<PanelCase> cases400;
    std::vector<PanelCase> cases40;
};

void criterion_6(SharedDatasets& shared) {
    const auto t0 = Clock::now();

    // Midspan point load approximated by the narrowest symmetric profile
    // spike the 20-sample grid can carry (samples 9 and 10).  The equivalent
    // concentrated load is the integral of that piecewise-linear profile,
    // P = 2 q W L / 19.  Stations of the 38-division mesh coincide with the
    // sample points, so the lumped loads reproduce the integral exactly.
    PanelCase beam = beam_case();
    const double q = 1e4;
    for (auto& lp : beam.loads) {
        lp.samples[9] = q;
        lp.samples[10] = q;
    }
    const PanelGeometry& g = beam.geometry;
    const double I = g.width_m * std::pow(g.plate_thickness_mm * 1e-3, 3) / 12.0;
    const double P = 2.0 * q * g.width_m * g.length_m / 19.0;
    const double w_ref =
        P * std::pow(g.length_m, 3) / (48.0 * beam.material.youngs_modulus_pa * I);
    GrillageMesh mesh;
    mesh.n_along = 38;
    const GrillageModel beam_model(beam, mesh);
    const GrillageSolution beam_sol = solve_static(beam_model);
    const double w_mid =
        beam_sol.u[static_cast<size_t>(6 * beam_model.node_id(0, mesh.n_along / 2) + 2)];
    const double beam_err = std::abs(w_mid - w_ref) / w_ref;
    const bool beam_ok = beam_err < 0.01;

    // Linearity: tripling a uniform load triples every dof.
    PanelCase uni = beam_case();
    for (auto& lp : uni.loads) lp.samples.fill(q);
    PanelCase uni3 = beam_case();
    for (auto& lp : uni3.loads) lp.samples.fill(3.0 * q);
    const GrillageModel m1(uni), m3(uni3);
    const GrillageSolution s1 = solve_static(m1), s3 = solve_static(m3);
    double lin_err = 0.0, lin_scale = 0.0;
    for (size_t i = 0; i < s1.u.size(); ++i) {
        lin_err = std::max(lin_err, std::abs(s3.u[i] - 3.0 * s1.u[i]));
        lin_scale = std::max(lin_scale, std::abs(s3.u[i]));
    }
    const double lin_rel = lin_err / std::max(lin_scale, 1e-300);
    const bool lin_ok = lin_rel <= 1e-8;

    // Symmetry: the uniform beam deflects symmetrically about midspan.
    const int n_st = static_cast<int>(m1.x_stations().size());
    const int n_ln = static_cast<int>(m1.y_lines().size());
    double sym_err = 0.0, sym_scale = 0.0;
    for (int line = 0; line < n_ln; ++line) {
        for (int i = 0; i < n_st; ++i) {
            const double a = s1.u[static_cast<size_t>(6 * m1.node_id(line, i) + 2)];
            const double b =
                s1.u[static_cast<size_t>(6 * m1.node_id(line, n_st - 1 - i) + 2)];
            sym_err = std::max(sym_err, std::abs(a - b));
            sym_scale = std::max(sym_scale, std::abs(a));
        }
    }
    const double sym_rel = sym_err / std::max(sym_scale, 1e-300);
    const bool sym_ok = sym_rel <= 1e-8;

    // Residuals on every generated case (the two datasets the training
    // criteria use downstream).
    double max_res = 0.0;
    shared.cases400 = generate_cases(400, 2026, &max_res);
    shared.cases40 = generate_cases(40, 515, &max_res);
    const bool res_ok = max_res <= 1e-8;

    report(6, beam_ok && lin_ok && sym_ok && res_ok,
           "oracle: beam error " + fmt(100.0 * beam_err) + "% of PL^3/48EI, linearity " +
               fmt(lin_rel) + ", symmetry " + fmt(sym_rel) + ", worst residual " +
               fmt(max_res) + " over 440 cases",
           seconds_since(t0));
}

// ------------------------------------------------------------------------
// 7. RMSE hand values.
// ------------------------------------------------------------------------
void criterion_7() {
    const auto t0 = Clock::now();
    const Tensor y = Tensor::from_values({2, 1}, {1.25, -0.5});
    const bool ident = rmse(y, y) == 0.0;
    const Tensor a = Tensor::from_values({2, 1}, {0.0, 0.0});
    const Tensor b = Tensor::from_values({2, 1}, {3.0, 4.0});
    const bool hand = rmse(a, b) == std::sqrt(12.5);
    report(7, ident && hand,
           std::string("rmse: identity 0 ") + (ident ? "exact" : "NOT exact") +
               ", [0,0] vs [3,4] = sqrt(12.5) " + (hand ? "exact" : "NOT exact"),
           seconds_since(t0));
}

// ------------------------------------------------------------------------
// 8. HGT on variant (d) beats GraphSAGE on the homogeneous baseline.
// ------------------------------------------------------------------------
TrainConfig desk_scale_config() {
    TrainConfig base;
    base.network.layers = 3;
    base.network.hidden = 32;
    base.network.heads = 4;
    base.network.batch_size = 100;
    base.epochs = 30;
    base.seed = 2026;
    base.channel = Channel::stress;
    base.variant = Variant::d;
    return base;
}

void criterion_8(const SharedDatasets& shared, Dataset& ds_out, CompareResult& cr_out) {
    const auto t0 = Clock::now();
    ds_out = Dataset::make(shared.cases400, Rng::derive(2026, "split"));

    // The generator must have produced non-uniform prescribed DOF profiles.
    bool non_uniform = false;
    for (const EdgeBC& bc : ds_out.cases.front().edge_bcs) {
        for (int d = 0; d < kNumDofs; ++d) {
            if (!bc.known[static_cast<size_t>(d)]) continue;
            const Profile& p = bc.profiles[static_cast<size_t>(d)];
            for (double v : p) non_uniform = non_uniform || v != p[0];
        }
    }

    cr_out = compare_homo_hetero(ds_out, desk_scale_config(), 5);
    const bool direction = cr_out.hgt.rmse_mean < cr_out.sage.rmse_mean;
    report(8, direction && non_uniform,
           "hetero vs homo: HGT(d) " + fmt(cr_out.hgt.rmse_mean) + " +/- " +
               fmt(cr_out.hgt.rmse_std) + " < SAGE " + fmt(cr_out.sage.rmse_mean) +
               " +/- " + fmt(cr_out.sage.rmse_std) + " MPa over 5 seeds" +
               (non_uniform ? "" : "; WARNING: uniform BC profiles"),
           seconds_since(t0));
}

// ------------------------------------------------------------------------
// 9. Training-size study: size 100 overfits relative to the full size.
// ------------------------------------------------------------------------
void criterion_9(const Dataset& ds, const CompareResult& cr) {
    const auto t0 = Clock::now();
    // The full-size mean reuses criterion 8's variant-(d) runs: the data-size
    // study's full-size row is bitwise identical to them (same derived seeds,
    // same config, training subset equal to the whole training split — the
    // unit suite asserts this equivalence).
    const std::vector<DataSizeRow> rows =
        data_size_study(ds, {100}, desk_scale_config(), 5);
    const double full_mean = cr.hgt.rmse_mean;
    const bool pass = rows.front().rmse_mean > full_mean;
    report(9, pass,
           "data size: RMSE at 100 = " + fmt(rows.front().rmse_mean) + " > full (" +
               std::to_string(static_cast<int>(ds.split.train.size())) + ") = " +
               fmt(full_mean) + " MPa over 5 seeds",
           seconds_since(t0));
}

// ------------------------------------------------------------------------
// 10. Determinism, bitwise round-trips, corrupted files, CLI exit codes.
// ------------------------------------------------------------------------
int run_cli(const std::string& args) {
#ifdef HETPANEL_CLI_PATH
    const std::string cmd =
        std::string("\"") + HETPANEL_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
    (void)args;
    return -1;
#endif
}

void criterion_10(const SharedDatasets& shared) {
    const auto t0 = Clock::now();
    const fs::path tmp =
        fs::temp_directory_path() / ("hetpanel-acceptance-" + std::to_string(getpid()));
    fs::create_directories(tmp);
    std::vector<std::string> faults;

    // Determinism: identical (config, seed) -> bitwise identical curves.
    const std::vector<PanelCase> dozen(shared.cases40.begin(), shared.cases40.begin() + 12);
    const Dataset ds = Dataset::make(dozen, Rng::derive(31, "split"));
    TrainConfig tc;
    tc.network.layers = 2;
    tc.network.hidden = 8;
    tc.network.heads = 2;
    tc.network.batch_size = 4;
    tc.epochs = 3;
    tc.seed = 31;
    const GraphSet graphs(ds.cases, tc.variant);
    const TrainResult ra = train_run(tc, ds, graphs);
    const TrainResult rb = train_run(tc, ds, graphs);
    if (ra.metrics.train_rmse != rb.metrics.train_rmse ||
        ra.metrics.val_rmse != rb.metrics.val_rmse ||
        ra.metrics.final_test_rmse != rb.metrics.final_test_rmse) {
        faults.push_back("repeat run not bitwise identical");
    }

    // Dataset round-trip.
    const fs::path d1 = tmp / "rt1.hpds", d2 = tmp / "rt2.hpds";
    save_dataset(dozen, d1.string());
    save_dataset(load_dataset(d1.string()), d2.string());
    if (slurp(d1) != slurp(d2)) faults.push_back("dataset round-trip not bitwise");

    // Checkpoint round-trip through a freshly initialized model.
    CheckpointMeta meta;
    meta.config = tc.network;
    meta.variant = tc.variant;
    meta.channel = tc.channel;
    const fs::path c1 = tmp / "rt1.hpck", c2 = tmp / "rt2.hpck";
    save_checkpoint(c1.string(), meta, graphs.catalog(), *ra.store);
    {
        ParamStore fresh;
        Rng rng(999);
        const Model m(tc.network, graphs.catalog(), fresh, rng);
        load_checkpoint(c1.string(), meta, graphs.catalog(), fresh);
        save_checkpoint(c2.string(), meta, graphs.catalog(), fresh);
    }
    if (slurp(c1) != slurp(c2)) faults.push_back("checkpoint round-trip not bitwise");

    // Corrupted files fail cleanly (every single-byte flip rejected).
    const std::string ds_bytes = slurp(d1), ck_bytes = slurp(c1);
    Rng fuzz(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::string mutated = ds_bytes;
        const size_t pos = static_cast<size_t>(
            fuzz.uniform_index(static_cast<std::uint64_t>(mutated.size())));
        mutated[pos] = static_cast<char>(static_cast<unsigned char>(mutated[pos]) ^
                                         static_cast<unsigned>(fuzz.uniform_int(1, 255)));
        const fs::path bad = tmp / "bad.hpds";
        std::ofstream(bad, std::ios::binary).write(mutated.data(),
                                                   static_cast<std::streamsize>(mutated.size()));
        try {
            (void)load_dataset(bad.string());
            faults.push_back("corrupted dataset loaded at byte " + std::to_string(pos));
        } catch (const FormatError&) {
        }
    }
    for (int trial = 0; trial < 30; ++trial) {
        std::string mutated = ck_bytes;
        const size_t pos = static_cast<size_t>(
            fuzz.uniform_index(static_cast<std::uint64_t>(mutated.size())));
        mutated[pos] = static_cast<char>(static_cast<unsigned char>(mutated[pos]) ^
                                         static_cast<unsigned>(fuzz.uniform_int(1, 255)));
        const fs::path bad = tmp / "bad.hpck";
        std::ofstream(bad, std::ios::binary).write(mutated.data(),
                                                   static_cast<std::streamsize>(mutated.size()));
        try {
            ParamStore fresh;
            Rng rng(1000);
            const Model m(tc.network, graphs.catalog(), fresh, rng);
            load_checkpoint(bad.string(), meta, graphs.catalog(), fresh);
            faults.push_back("corrupted checkpoint loaded at byte " + std::to_string(pos));
        } catch (const FormatError&) {
        }
    }

    // Exit-code mapping of the error taxonomy.
    if (static_cast<int>(UsageError("x").code()) != 1 ||
        static_cast<int>(FormatError("x").code()) != 2 ||
        static_cast<int>(NumericError("x").code()) != 3) {
        faults.push_back("error taxonomy exit codes wrong");
    }

    // CLI integration: exit codes 0/1/2/3 and generation determinism
    // across worker counts.
#ifdef HETPANEL_CLI_PATH
    const std::string g1 = (tmp / "cli1.hpds").string(), g2 = (tmp / "cli2.hpds").string();
    if (run_cli("gen -n 10 --seed 5 --jobs 1 --out \"" + g1 + "\"") != 0)
        faults.push_back("cli gen exit != 0");
    if (run_cli("gen -n 10 --seed 5 --jobs 3 --out \"" + g2 + "\"") != 0)
        faults.push_back("cli gen (3 jobs) exit != 0");
    if (slurp(g1) != slurp(g2)) faults.push_back("cli gen not deterministic across --jobs");
    if (run_cli("train \"" + (tmp / "missing.hpds").string() + "\"") != 1)
        faults.push_back("cli missing dataset exit != 1");
    if (run_cli("train \"" + g1 + "\" --variant q") != 1)
        faults.push_back("cli bad variant exit != 1");
    {
        std::ofstream(tmp / "garbage.hpds", std::ios::binary) << "not an archive";
        if (run_cli("train \"" + (tmp / "garbage.hpds").string() + "\"") != 2)
            faults.push_back("cli corrupt dataset exit != 2");
    }
    {
        std::ofstream(tmp / "diverge.ini")
            << "[network]\nlayers = 2\nhidden = 8\nheads = 2\nbatch_size = 4\nlr = 1e308\n"
            << "[train]\nepochs = 3\n";
        if (run_cli("train \"" + g1 + "\" --config \"" + (tmp / "diverge.ini").string() +
                    "\" --out \"" + (tmp / "divrun").string() + "\"") != 3)
            faults.push_back("cli diverging training exit != 3");
    }
#else
    faults.push_back("CLI path not wired into the build");
#endif

    fs::remove_all(tmp);
    std::string detail = "determinism + round-trips + corruption + CLI exit codes";
    if (!faults.empty()) {
        detail += ": ";
        for (size_t i = 0; i < faults.size(); ++i)
            detail += (i != 0 ? "; " : "") + faults[i];
    }
    report(10, faults.empty(), detail, seconds_since(t0));
}

// ------------------------------------------------------------------------
// 11. Default-configuration training improves over 50 epochs.
// ------------------------------------------------------------------------
void criterion_11(const SharedDatasets& shared) {
    const auto t0 = Clock::now();
    const Dataset ds = Dataset::make(shared.cases40, Rng::derive(515, "split"));
    TrainConfig tc;  // Table-style defaults: 6 layers, 64 hidden, 4 heads
    tc.epochs = 50;
    tc.seed = 515;
    const GraphSet graphs(ds.cases, tc.variant);
    const TrainResult res = train_run(tc, ds, graphs);
    const double first = res.metrics.train_rmse.front();
    const double last = res.metrics.train_rmse.back();
    const double secs = seconds_since(t0);
    const bool pass = last < first && secs < 600.0;
    report(11, pass,
           "training sanity: train RMSE epoch 50 = " + fmt(last) + " < epoch 1 = " +
               fmt(first) + " on the 40-case smoke set",
           secs);
}

}  // namespace

int main() {
    std::printf("hetpanel acceptance criteria\n");
    std::fflush(stdout);
    SharedDatasets shared;
    Dataset ds400;
    CompareResult cr;
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6(shared);
        criterion_7();
        criterion_8(shared, ds400, cr);
        criterion_9(ds400, cr);
        criterion_10(shared);
        criterion_11(shared);
    } catch (const std::exception& e) {
        std::printf("FATAL: unhandled error: %s\n", e.what());
        return 1;
    }
    std::printf("acceptance: %d/11 criteria passed\n", 11 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
