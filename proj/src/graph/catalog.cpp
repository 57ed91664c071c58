#include "hetpanel/graph/catalog.hpp"

#include "hetpanel/core/error.hpp"
#include "hetpanel/panel/case.hpp"

namespace hetpanel {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::a: return "a";
        case Variant::b: return "b";
        case Variant::c: return "c";
        case Variant::d: return "d";
        case Variant::e: return "e";
        case Variant::f: return "f";
        case Variant::homogeneous: return "homogeneous";
    }
    return "?";
}

Variant variant_from_string(const std::string& s) {
    for (Variant v : {Variant::a, Variant::b, Variant::c, Variant::d, Variant::e, Variant::f,
                      Variant::homogeneous}) {
        if (s == variant_name(v)) return v;
    }
    throw ConfigError("unknown variant '" + s +
                      "'; expected one of a, b, c, d, e, f, homogeneous");
}

void VariantSpec::validate() const {
    if (dof_mode == DofMode::combined && use_edge_node) {
        throw ConfigError(
            "illegal variant: combined-dof boundary nodes cannot be used together with "
            "edge nodes (no such representation exists)");
    }
}

Variant VariantSpec::letter() const {
    validate();
    if (dof_mode == DofMode::combined) {
        return isolated_loading ? Variant::f : Variant::e;
    }
    if (use_edge_node) return isolated_loading ? Variant::d : Variant::c;
    return isolated_loading ? Variant::b : Variant::a;
}

VariantSpec VariantSpec::for_variant(Variant v) {
    VariantSpec s;
    switch (v) {
        case Variant::a:
        case Variant::b:
            s.dof_mode = DofMode::separate;
            s.use_edge_node = false;
            break;
        case Variant::c:
        case Variant::d:
            s.dof_mode = DofMode::separate;
            s.use_edge_node = true;
            break;
        case Variant::e:
        case Variant::f:
            s.dof_mode = DofMode::combined;
            s.use_edge_node = false;
            break;
        case Variant::homogeneous:
            throw ConfigError("the homogeneous baseline has no heterogeneous VariantSpec");
    }
    s.isolated_loading = v == Variant::b || v == Variant::d || v == Variant::f;
    return s;
}

int RelationCatalog::node_type_index(const std::string& name) const {
    for (size_t i = 0; i < node_types.size(); ++i) {
        if (node_types[i].name == name) return static_cast<int>(i);
    }
    throw ConfigError("node type '" + name + "' is not part of variant " +
                      variant_name(variant));
}

namespace {

void add_pair(RelationCatalog& cat, const std::string& kind, int src, int dst,
              int spatial_code) {
    RelationInfo fwd;
    fwd.name = cat.node_types[static_cast<size_t>(src)].name + "__" + kind + "__" +
               cat.node_types[static_cast<size_t>(dst)].name;
    fwd.src_type = src;
    fwd.dst_type = dst;
    fwd.spatial_code = spatial_code;
    fwd.reverse = false;
    RelationInfo rev;
    rev.name = cat.node_types[static_cast<size_t>(dst)].name + "__" + kind + "_rev__" +
               cat.node_types[static_cast<size_t>(src)].name;
    rev.src_type = dst;
    rev.dst_type = src;
    rev.spatial_code = spatial_code;
    rev.reverse = true;
    cat.relations.push_back(std::move(fwd));
    cat.relations.push_back(std::move(rev));
}

}  // namespace

RelationCatalog relation_catalog(const VariantSpec& v) {
    v.validate();
    RelationCatalog cat;
    cat.variant = v.letter();

    const int geometry_width =
        kGeometryFeatureWidth + (v.isolated_loading ? 0 : kLoadFeatureWidth);
    cat.node_types.push_back({"geometry", geometry_width});
    const int geo = 0;
    int loading = -1;
    if (v.isolated_loading) {
        loading = static_cast<int>(cat.node_types.size());
        cat.node_types.push_back({"loading", kLoadFeatureWidth});
    }

    if (v.dof_mode == VariantSpec::DofMode::combined) {
        const int bc = static_cast<int>(cat.node_types.size());
        cat.node_types.push_back({"boundary_combined", kBoundaryCombinedWidth});
        for (int s = 0; s < SpatialRelation::kCount; ++s) {
            add_pair(cat, SpatialRelation::from_code(s).name(), geo, bc, s);
        }
    } else {
        std::vector<int> dof_types;
        for (int d = 0; d < kNumDofs; ++d) {
            dof_types.push_back(static_cast<int>(cat.node_types.size()));
            cat.node_types.push_back(
                {std::string("boundary_") + dof_name(static_cast<Dof>(d)), kBoundaryDofWidth});
        }
        if (v.use_edge_node) {
            const int en = static_cast<int>(cat.node_types.size());
            cat.node_types.push_back({"edge_node", kEdgeNodeWidth});
            for (int s = 0; s < SpatialRelation::kCount; ++s) {
                add_pair(cat, SpatialRelation::from_code(s).name(), geo, en, s);
            }
            for (int d = 0; d < kNumDofs; ++d) {
                add_pair(cat, std::string("dof_") + dof_name(static_cast<Dof>(d)), en,
                         dof_types[static_cast<size_t>(d)], -1);
            }
        } else {
            for (int d = 0; d < kNumDofs; ++d) {
                for (int s = 0; s < SpatialRelation::kCount; ++s) {
                    add_pair(cat,
                             SpatialRelation::from_code(s).name() + std::string("_") +
                                 dof_name(static_cast<Dof>(d)),
                             geo, dof_types[static_cast<size_t>(d)], s);
                }
            }
        }
    }

    if (v.isolated_loading) {
        add_pair(cat, "load", geo, loading, -1);
    }
    return cat;
}

RelationCatalog homogeneous_catalog() {
    RelationCatalog cat;
    cat.variant = Variant::homogeneous;
    cat.node_types.push_back({"unit", kHomogeneousWidth});
    // One undirected relation; the link list carries both directions.
    RelationInfo adj;
    adj.name = "unit__adjacent__unit";
    adj.src_type = 0;
    adj.dst_type = 0;
    adj.spatial_code = -1;
    adj.reverse = false;
    cat.relations.push_back(std::move(adj));
    return cat;
}

RelationCatalog catalog_for(Variant v) {
    return v == Variant::homogeneous ? homogeneous_catalog()
                                     : relation_catalog(VariantSpec::for_variant(v));
}

}  // namespace hetpanel
