#pragma once

#include <string>

#include "hetpanel/graph/catalog.hpp"
#include "hetpanel/nn/model.hpp"
#include "hetpanel/oracle/grillage.hpp"
#include "hetpanel/panel/field_grid.hpp"
#include "hetpanel/panel/geometry.hpp"

namespace hetpanel {

/// Training-protocol settings beyond the network hyperparameters.
struct TrainSettings {
    int epochs = 1000;
    int seeds = 5;  // number of repeat runs, seeds derived from the master seed
    Channel channel = Channel::stress;
    Variant variant = Variant::d;

    void validate() const;
};

/// Dataset-generation settings.
struct GenSettings {
    int cases = 400;
    GrillageMesh mesh;            // mesh_along / mesh_per_bay
    double residual_tol = 1e-10;
    GeometryRanges ranges;        // stiffener count bounds configurable
    CaseGenConfig casegen;

    void validate() const;
};

/// Full run configuration parsed from an INI-style file.  Every key is
/// optional; omitted keys keep the defaults above (network defaults mirror
/// the reference hyperparameter table).
struct RunConfig {
    NetworkConfig network;
    TrainSettings train;
    GenSettings gen;

    void validate() const;
};

/// Parses `path`.  Unknown sections/keys are rejected with a suggestion for
/// the nearest known key; malformed values report the line number.
RunConfig load_config(const std::string& path);

/// Parses configuration from an in-memory string (same grammar); `origin` is
/// used in error messages.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Serializes a RunConfig back to the INI grammar (used for run-directory
/// config echoes; load(parse(echo)) is the identity).
std::string config_to_string(const RunConfig& cfg);

}  // namespace hetpanel
