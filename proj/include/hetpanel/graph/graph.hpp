#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetpanel/core/tensor.hpp"
#include "hetpanel/graph/catalog.hpp"
#include "hetpanel/panel/case.hpp"

namespace hetpanel {

/// Directed links of one relation type, stored in build order (which is the
/// order message scatter follows, keeping reductions bit-stable).
struct LinkList {
    std::vector<std::int32_t> src;
    std::vector<std::int32_t> dst;

    std::size_t size() const { return src.size(); }
    void add(int s, int d) {
        src.push_back(static_cast<std::int32_t>(s));
        dst.push_back(static_cast<std::int32_t>(d));
    }
};

/// Typed graph for one panel case (or a disjoint union of several). Feature
/// rows align with the catalog's node types; known_mask rows mark nodes whose
/// features are real data (1) versus placeholders for unknown boundary state
/// (0) that the network replaces with its learned null embedding.
struct HeteroGraph {
    RelationCatalog catalog;
    std::vector<Tensor> features;                    // per node type, [n x width]
    std::vector<std::vector<std::uint8_t>> known_mask;  // per node type, length n
    std::vector<LinkList> links;                     // per relation type
    /// Number of geometry (or homogeneous unit) nodes contributed by each
    /// merged case, in merge order; a single build yields one entry.
    std::vector<int> case_unit_counts;

    int n_nodes(int type) const { return static_cast<int>(features[static_cast<size_t>(type)].rows()); }
    int n_node_types() const { return static_cast<int>(features.size()); }
};

/// Geometry feature vector (width 12): kind one-hot, plan dimensions,
/// thickness, centroid, normal — normalized by the reference scales.
std::vector<double> geometry_features(const StructuralUnit& u, const PanelGeometry& g,
                                      const FeatureScales& scales = {});

/// Boundary feature vector plus mask bit. dof < 0 requests combined mode
/// (width 121); dof in [0,6) requests that dof's profile (width 21).
/// Requesting a dof in combined mode or vice versa is a usage error at the
/// call sites that know the variant; here dof ∈ [-1, 5] is enforced.
std::pair<std::vector<double>, bool> boundary_features(const EdgeBC& bc, int dof,
                                                       const FeatureScales& scales = {});

/// Builds the typed graph for a legal heterogeneous variant.
HeteroGraph build_graph(const PanelCase& pc, const VariantSpec& v,
                        const FeatureScales& scales = {});

/// Builds the flat baseline: one node per unit (width 516), symmetric
/// unlabeled adjacency between units sharing a physical edge.
HeteroGraph build_homogeneous(const PanelCase& pc, const FeatureScales& scales = {});

/// Builds either representation from a variant letter.
HeteroGraph build_variant(const PanelCase& pc, Variant v, const FeatureScales& scales = {});

/// Structural diagnostics: index bounds, feature widths, relation list
/// arity, mask sizes, finiteness. Empty result = valid.
std::vector<std::string> validate_graph(const HeteroGraph& g);

/// Disjoint union of graphs sharing one catalog (same variant); node indices
/// are offset per type, link lists concatenated in input order.
HeteroGraph merge_graphs(const std::vector<const HeteroGraph*>& graphs);

/// Per-case target tensor [n_units x 800]: the four 10x20 channel grids of
/// each unit flattened row-major in channel order.
Tensor target_matrix(const PanelCase& pc);

}  // namespace hetpanel
