#pragma once

#include <string>
#include <vector>

#include "hetpanel/panel/edges.hpp"

namespace hetpanel {

/// The six heterogeneous representations plus the flat baseline.
enum class Variant : int { a = 0, b, c, d, e, f, homogeneous };

std::string variant_name(Variant v);
Variant variant_from_string(const std::string& s);

/// Structural description of a heterogeneous variant.
///  - dof_mode separate: one boundary node per dof kind per edge;
///    combined: one boundary node per edge carrying all six profiles.
///  - use_edge_node: interpose a typed edge node between geometry and
///    boundary nodes (legal only with separate dofs).
///  - isolated_loading: loads live on their own node type instead of being
///    folded into the geometry features.
struct VariantSpec {
    enum class DofMode { separate, combined };
    DofMode dof_mode = DofMode::combined;
    bool use_edge_node = false;
    bool isolated_loading = false;

    void validate() const;
    Variant letter() const;
    static VariantSpec for_variant(Variant v);
};

/// Reference scales used to keep raw physical inputs O(1).
struct FeatureScales {
    double plan_m = 3.0;        // panel plan dimensions
    double section_mm = 20.0;   // plate/web/flange thicknesses
    double disp_mm = 1.0;       // boundary displacement profiles
    double rot_rad = 0.01;      // boundary rotation profiles
    double pressure_pa = 1e5;   // lateral pressure profiles
};

struct NodeTypeInfo {
    std::string name;
    int feature_width = 0;
};

/// One directed meta-relation (source type, relation kind, target type).
/// spatial_code >= 0 selects one of the 12 SpatialRelations; -1 marks a
/// non-spatial relation (dof hookup or loading). Forward/reverse pairs are
/// stored adjacently: relation 2k is forward, 2k+1 its reverse.
struct RelationInfo {
    std::string name;
    int src_type = 0;
    int dst_type = 0;
    int spatial_code = -1;
    bool reverse = false;
};

struct RelationCatalog {
    Variant variant = Variant::e;
    std::vector<NodeTypeInfo> node_types;
    std::vector<RelationInfo> relations;

    int node_type_index(const std::string& name) const;
    /// Relation kinds counted in one direction (forward only).
    int kinds_per_direction() const { return static_cast<int>(relations.size()) / 2; }
};

/// Enumerates node types and relation types for a legal variant. Widths
/// depend only on the VariantSpec. Throws ConfigError for the illegal
/// (combined dofs + edge node) combination.
RelationCatalog relation_catalog(const VariantSpec& v);

/// Catalog of the homogeneous baseline: one node type (width 516), one
/// symmetric adjacency relation.
RelationCatalog homogeneous_catalog();

/// Catalog for any variant letter, including the homogeneous baseline.
RelationCatalog catalog_for(Variant v);

constexpr int kGeometryFeatureWidth = 12;
constexpr int kLoadFeatureWidth = 20;         // kProfileSamples
constexpr int kBoundaryDofWidth = 21;         // 20 samples + mask bit
constexpr int kBoundaryCombinedWidth = 121;   // 6 x 20 + mask bit
constexpr int kEdgeNodeWidth = 7;             // orientation one-hot + length + midpoint
constexpr int kHomogeneousWidth = kGeometryFeatureWidth + 4 * kBoundaryCombinedWidth +
                                  kLoadFeatureWidth;  // 516

}  // namespace hetpanel
