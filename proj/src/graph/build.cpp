#include <cmath>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "hetpanel/core/error.hpp"
#include "hetpanel/graph/graph.hpp"

namespace hetpanel {

std::vector<double> geometry_features(const StructuralUnit& u, const PanelGeometry& g,
                                      const FeatureScales& scales) {
    (void)g;
    std::vector<double> f(kGeometryFeatureWidth, 0.0);
    f[static_cast<size_t>(u.kind)] = 1.0;
    f[3] = u.rect.len_u / scales.plan_m;
    f[4] = u.rect.len_v / scales.plan_m;
    f[5] = u.thickness_mm / scales.section_mm;
    const Vec3 c = u.rect.centroid();
    f[6] = c.x / scales.plan_m;
    f[7] = c.y / scales.plan_m;
    f[8] = c.z / scales.plan_m;
    const Vec3 n = u.rect.normal();
    f[9] = n.x;
    f[10] = n.y;
    f[11] = n.z;
    return f;
}

std::pair<std::vector<double>, bool> boundary_features(const EdgeBC& bc, int dof,
                                                       const FeatureScales& scales) {
    if (dof < -1 || dof >= kNumDofs) {
        throw UsageError("boundary_features: dof must be -1 (combined) or in [0,6), got " +
                         std::to_string(dof));
    }
    auto scale_of = [&](int d) { return d < 3 ? scales.disp_mm : scales.rot_rad; };
    if (dof >= 0) {
        std::vector<double> f(kBoundaryDofWidth, 0.0);
        const bool known = bc.known[static_cast<size_t>(dof)];
        if (known) {
            for (int j = 0; j < kProfileSamples; ++j) {
                f[static_cast<size_t>(j)] =
                    bc.profiles[static_cast<size_t>(dof)][static_cast<size_t>(j)] /
                    scale_of(dof);
            }
        }
        f[kBoundaryDofWidth - 1] = known ? 1.0 : 0.0;
        return {std::move(f), known};
    }
    std::vector<double> f(kBoundaryCombinedWidth, 0.0);
    bool all_known = true;
    for (int d = 0; d < kNumDofs; ++d) all_known = all_known && bc.known[static_cast<size_t>(d)];
    for (int d = 0; d < kNumDofs; ++d) {
        if (!bc.known[static_cast<size_t>(d)]) continue;
        for (int j = 0; j < kProfileSamples; ++j) {
            f[static_cast<size_t>(d * kProfileSamples + j)] =
                bc.profiles[static_cast<size_t>(d)][static_cast<size_t>(j)] / scale_of(d);
        }
    }
    f[kBoundaryCombinedWidth - 1] = all_known ? 1.0 : 0.0;
    return {std::move(f), all_known};
}

namespace {

std::vector<double> load_features(const LoadProfile& lp, const FeatureScales& scales) {
    std::vector<double> f(kLoadFeatureWidth, 0.0);
    for (int j = 0; j < kProfileSamples; ++j) {
        f[static_cast<size_t>(j)] = lp.samples[static_cast<size_t>(j)] / scales.pressure_pa;
    }
    return f;
}

std::vector<double> edge_node_features(const PhysicalEdge& e, const FeatureScales& scales) {
    std::vector<double> f(kEdgeNodeWidth, 0.0);
    f[static_cast<size_t>(e.orientation)] = 1.0;
    f[3] = (e.p1 - e.p0).norm() / scales.plan_m;
    const Vec3 mid = (e.p0 + e.p1) * 0.5;
    f[4] = mid.x / scales.plan_m;
    f[5] = mid.y / scales.plan_m;
    f[6] = mid.z / scales.plan_m;
    return f;
}

void set_row(Tensor& t, int row, const std::vector<double>& v) {
    for (size_t i = 0; i < v.size(); ++i) t.at(row, static_cast<int64_t>(i)) = v[i];
}

class RelationIndex {
public:
    explicit RelationIndex(const RelationCatalog& cat) {
        for (size_t i = 0; i < cat.relations.size(); ++i) {
            by_name_.emplace(cat.relations[i].name, static_cast<int>(i));
        }
    }
    int operator()(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end()) {
            throw ValidationError("relation '" + name + "' missing from catalog");
        }
        return it->second;
    }

private:
    std::unordered_map<std::string, int> by_name_;
};

}  // namespace

HeteroGraph build_graph(const PanelCase& pc, const VariantSpec& v,
                        const FeatureScales& scales) {
    v.validate();
    const auto units = structural_units(pc.geometry);
    const auto edges = physical_edges(units);
    validate_case(pc, units, edges);

    HeteroGraph g;
    g.catalog = relation_catalog(v);
    const RelationIndex rel(g.catalog);
    g.features.resize(g.catalog.node_types.size());
    g.known_mask.resize(g.catalog.node_types.size());
    g.links.resize(g.catalog.relations.size());

    const int n_units = static_cast<int>(units.size());
    const int n_edges = static_cast<int>(edges.size());
    const bool combined = v.dof_mode == VariantSpec::DofMode::combined;

    const int geo = g.catalog.node_type_index("geometry");
    g.features[static_cast<size_t>(geo)] =
        Tensor::zeros({n_units, g.catalog.node_types[static_cast<size_t>(geo)].feature_width});
    g.known_mask[static_cast<size_t>(geo)].assign(static_cast<size_t>(n_units), 1);
    for (int i = 0; i < n_units; ++i) {
        std::vector<double> f = geometry_features(units[static_cast<size_t>(i)], pc.geometry, scales);
        if (!v.isolated_loading) {
            const auto lf = load_features(pc.loads[static_cast<size_t>(i)], scales);
            f.insert(f.end(), lf.begin(), lf.end());
        }
        set_row(g.features[static_cast<size_t>(geo)], i, f);
    }

    if (v.isolated_loading) {
        const int load = g.catalog.node_type_index("loading");
        g.features[static_cast<size_t>(load)] = Tensor::zeros({n_units, kLoadFeatureWidth});
        g.known_mask[static_cast<size_t>(load)].assign(static_cast<size_t>(n_units), 1);
        for (int i = 0; i < n_units; ++i) {
            set_row(g.features[static_cast<size_t>(load)], i,
                    load_features(pc.loads[static_cast<size_t>(i)], scales));
        }
        for (int i = 0; i < n_units; ++i) {
            g.links[static_cast<size_t>(rel("geometry__load__loading"))].add(i, i);
            g.links[static_cast<size_t>(rel("loading__load_rev__geometry"))].add(i, i);
        }
    }

    if (combined) {
        const int bt = g.catalog.node_type_index("boundary_combined");
        g.features[static_cast<size_t>(bt)] = Tensor::zeros({n_edges, kBoundaryCombinedWidth});
        g.known_mask[static_cast<size_t>(bt)].assign(static_cast<size_t>(n_edges), 0);
        for (int e = 0; e < n_edges; ++e) {
            auto [f, known] = boundary_features(pc.edge_bcs[static_cast<size_t>(e)], -1, scales);
            set_row(g.features[static_cast<size_t>(bt)], e, f);
            g.known_mask[static_cast<size_t>(bt)][static_cast<size_t>(e)] = known ? 1 : 0;
        }
    } else {
        for (int d = 0; d < kNumDofs; ++d) {
            const int bt = g.catalog.node_type_index(std::string("boundary_") +
                                                     dof_name(static_cast<Dof>(d)));
            g.features[static_cast<size_t>(bt)] = Tensor::zeros({n_edges, kBoundaryDofWidth});
            g.known_mask[static_cast<size_t>(bt)].assign(static_cast<size_t>(n_edges), 0);
            for (int e = 0; e < n_edges; ++e) {
                auto [f, known] =
                    boundary_features(pc.edge_bcs[static_cast<size_t>(e)], d, scales);
                set_row(g.features[static_cast<size_t>(bt)], e, f);
                g.known_mask[static_cast<size_t>(bt)][static_cast<size_t>(e)] = known ? 1 : 0;
            }
        }
    }
    if (v.use_edge_node) {
        const int en = g.catalog.node_type_index("edge_node");
        g.features[static_cast<size_t>(en)] = Tensor::zeros({n_edges, kEdgeNodeWidth});
        g.known_mask[static_cast<size_t>(en)].assign(static_cast<size_t>(n_edges), 1);
        for (int e = 0; e < n_edges; ++e) {
            set_row(g.features[static_cast<size_t>(en)], e,
                    edge_node_features(edges[static_cast<size_t>(e)], scales));
        }
    }

    // Geometry-side links: one per (edge, adjacent unit) with the unit's
    // spatial relation, in edge-id then adjacency order.
    for (const auto& e : edges) {
        for (const auto& adj : e.adjacency) {
            const std::string srel = adj.relation.name();
            if (combined) {
                g.links[static_cast<size_t>(
                            rel("geometry__" + srel + "__boundary_combined"))]
                    .add(adj.unit_id, e.id);
                g.links[static_cast<size_t>(
                            rel("boundary_combined__" + srel + "_rev__geometry"))]
                    .add(e.id, adj.unit_id);
            } else if (v.use_edge_node) {
                g.links[static_cast<size_t>(rel("geometry__" + srel + "__edge_node"))].add(
                    adj.unit_id, e.id);
                g.links[static_cast<size_t>(rel("edge_node__" + srel + "_rev__geometry"))].add(
                    e.id, adj.unit_id);
            } else {
                for (int d = 0; d < kNumDofs; ++d) {
                    const std::string dn = dof_name(static_cast<Dof>(d));
                    g.links[static_cast<size_t>(
                                rel("geometry__" + srel + "_" + dn + "__boundary_" + dn))]
                        .add(adj.unit_id, e.id);
                    g.links[static_cast<size_t>(
                                rel("boundary_" + dn + "__" + srel + "_" + dn + "_rev__geometry"))]
                        .add(e.id, adj.unit_id);
                }
            }
        }
        if (v.use_edge_node) {
            for (int d = 0; d < kNumDofs; ++d) {
                const std::string dn = dof_name(static_cast<Dof>(d));
                g.links[static_cast<size_t>(rel("edge_node__dof_" + dn + "__boundary_" + dn))]
                    .add(e.id, e.id);
                g.links[static_cast<size_t>(
                            rel("boundary_" + dn + "__dof_" + dn + "_rev__edge_node"))]
                    .add(e.id, e.id);
            }
        }
    }

    g.case_unit_counts = {n_units};
    return g;
}

HeteroGraph build_homogeneous(const PanelCase& pc, const FeatureScales& scales) {
    const auto units = structural_units(pc.geometry);
    const auto edges = physical_edges(units);
    validate_case(pc, units, edges);

    HeteroGraph g;
    g.catalog = homogeneous_catalog();
    g.features.resize(1);
    g.known_mask.resize(1);
    g.links.resize(1);

    const int n_units = static_cast<int>(units.size());
    g.features[0] = Tensor::zeros({n_units, kHomogeneousWidth});
    g.known_mask[0].assign(static_cast<size_t>(n_units), 1);
    for (int i = 0; i < n_units; ++i) {
        std::vector<double> f =
            geometry_features(units[static_cast<size_t>(i)], pc.geometry, scales);
        const auto sides = unit_side_edges(units[static_cast<size_t>(i)], edges);
        for (int s = 0; s < 4; ++s) {
            auto [bf, known] =
                boundary_features(pc.edge_bcs[static_cast<size_t>(sides[static_cast<size_t>(s)])],
                                  -1, scales);
            (void)known;
            f.insert(f.end(), bf.begin(), bf.end());
        }
        const auto lf = load_features(pc.loads[static_cast<size_t>(i)], scales);
        f.insert(f.end(), lf.begin(), lf.end());
        set_row(g.features[0], i, f);
    }

    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        for (size_t i = 0; i < e.adjacency.size(); ++i) {
            for (size_t j = i + 1; j < e.adjacency.size(); ++j) {
                const int a = e.adjacency[i].unit_id, b = e.adjacency[j].unit_id;
                if (seen.insert({std::min(a, b), std::max(a, b)}).second) {
                    g.links[0].add(a, b);
                    g.links[0].add(b, a);
                }
            }
        }
    }

    g.case_unit_counts = {n_units};
    return g;
}

HeteroGraph build_variant(const PanelCase& pc, Variant v, const FeatureScales& scales) {
    if (v == Variant::homogeneous) return build_homogeneous(pc, scales);
    return build_graph(pc, VariantSpec::for_variant(v), scales);
}

std::vector<std::string> validate_graph(const HeteroGraph& g) {
    std::vector<std::string> out;
    const size_t nt = g.catalog.node_types.size();
    if (g.features.size() != nt) {
        out.push_back("feature matrix count " + std::to_string(g.features.size()) +
                      " does not match node type count " + std::to_string(nt));
        return out;
    }
    if (g.known_mask.size() != nt) {
        out.push_back("mask array count does not match node type count");
        return out;
    }
    for (size_t t = 0; t < nt; ++t) {
        const auto& info = g.catalog.node_types[t];
        const Tensor& f = g.features[t];
        if (f.rank() != 2 || f.cols() != info.feature_width) {
            out.push_back("node type '" + info.name + "' feature width " +
                          std::to_string(f.rank() == 2 ? f.cols() : -1) + " != schema width " +
                          std::to_string(info.feature_width));
        }
        if (static_cast<int64_t>(g.known_mask[t].size()) != f.rows()) {
            out.push_back("node type '" + info.name + "' mask length " +
                          std::to_string(g.known_mask[t].size()) + " != node count " +
                          std::to_string(f.rows()));
        }
        if (!f.all_finite()) {
            out.push_back("node type '" + info.name + "' features contain a non-finite entry");
        }
    }
    if (g.links.size() != g.catalog.relations.size()) {
        out.push_back("link list count " + std::to_string(g.links.size()) +
                      " does not match relation count " +
                      std::to_string(g.catalog.relations.size()));
        return out;
    }
    for (size_t r = 0; r < g.links.size(); ++r) {
        const auto& info = g.catalog.relations[r];
        const auto& ll = g.links[r];
        if (ll.src.size() != ll.dst.size()) {
            out.push_back("relation '" + info.name + "' has mismatched src/dst lengths");
            continue;
        }
        const int ns = g.n_nodes(info.src_type);
        const int nd = g.n_nodes(info.dst_type);
        for (size_t k = 0; k < ll.src.size(); ++k) {
            if (ll.src[k] < 0 || ll.src[k] >= ns) {
                out.push_back("relation '" + info.name + "' link " + std::to_string(k) +
                              " source index " + std::to_string(ll.src[k]) +
                              " out of range [0," + std::to_string(ns) + ")");
            }
            if (ll.dst[k] < 0 || ll.dst[k] >= nd) {
                out.push_back("relation '" + info.name + "' link " + std::to_string(k) +
                              " target index " + std::to_string(ll.dst[k]) +
                              " out of range [0," + std::to_string(nd) + ")");
            }
        }
    }
    int total_units = 0;
    for (int c : g.case_unit_counts) total_units += c;
    if (!g.case_unit_counts.empty() && total_units != g.n_nodes(0)) {
        out.push_back("case unit counts sum to " + std::to_string(total_units) +
                      " but the graph has " + std::to_string(g.n_nodes(0)) +
                      " geometry nodes");
    }
    return out;
}

HeteroGraph merge_graphs(const std::vector<const HeteroGraph*>& graphs) {
    if (graphs.empty()) throw UsageError("merge_graphs: empty input");
    const HeteroGraph& first = *graphs.front();
    HeteroGraph out;
    out.catalog = first.catalog;
    const size_t nt = first.catalog.node_types.size();
    const size_t nr = first.catalog.relations.size();

    for (const HeteroGraph* gp : graphs) {
        if (gp->catalog.node_types.size() != nt || gp->catalog.relations.size() != nr ||
            gp->catalog.variant != first.catalog.variant) {
            throw ConfigError("merge_graphs: graphs use different variants/catalogs");
        }
        for (size_t t = 0; t < nt; ++t) {
            if (gp->catalog.node_types[t].name != first.catalog.node_types[t].name) {
                throw ConfigError("merge_graphs: node type mismatch at position " +
                                  std::to_string(t));
            }
        }
    }

    out.features.resize(nt);
    out.known_mask.resize(nt);
    out.links.resize(nr);
    std::vector<int64_t> rows(nt, 0);
    for (const HeteroGraph* gp : graphs) {
        for (size_t t = 0; t < nt; ++t) rows[t] += gp->features[t].rows();
    }
    for (size_t t = 0; t < nt; ++t) {
        out.features[t] =
            Tensor::zeros({rows[t], first.catalog.node_types[t].feature_width});
        out.known_mask[t].reserve(static_cast<size_t>(rows[t]));
    }

    std::vector<int> offset(nt, 0);
    for (const HeteroGraph* gp : graphs) {
        for (size_t t = 0; t < nt; ++t) {
            const Tensor& src = gp->features[t];
            const int64_t w = src.cols();
            for (int64_t r = 0; r < src.rows(); ++r) {
                for (int64_t c = 0; c < w; ++c) {
                    out.features[t].at(offset[t] + r, c) = src.at(r, c);
                }
            }
            out.known_mask[t].insert(out.known_mask[t].end(), gp->known_mask[t].begin(),
                                     gp->known_mask[t].end());
        }
        for (size_t r = 0; r < nr; ++r) {
            const auto& info = first.catalog.relations[r];
            const auto& ll = gp->links[r];
            for (size_t k = 0; k < ll.size(); ++k) {
                out.links[r].add(ll.src[k] + offset[static_cast<size_t>(info.src_type)],
                                 ll.dst[k] + offset[static_cast<size_t>(info.dst_type)]);
            }
        }
        for (size_t t = 0; t < nt; ++t) {
            offset[t] += static_cast<int>(gp->features[t].rows());
        }
        out.case_unit_counts.insert(out.case_unit_counts.end(), gp->case_unit_counts.begin(),
                                    gp->case_unit_counts.end());
    }
    return out;
}

Tensor target_matrix(const PanelCase& pc) {
    if (pc.targets.empty()) {
        throw DomainError("target_matrix: case has no solved targets");
    }
    const int n = static_cast<int>(pc.targets.size());
    Tensor t = Tensor::zeros({n, FieldGrid::kSize});
    for (int i = 0; i < n; ++i) {
        const FieldGrid& gr = pc.targets[static_cast<size_t>(i)];
        for (int k = 0; k < FieldGrid::kSize; ++k) {
            t.at(i, k) = gr.data[static_cast<size_t>(k)];
        }
    }
    return t;
}

}  // namespace hetpanel
