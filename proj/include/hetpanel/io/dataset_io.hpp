#pragma once

#include <string>
#include <vector>

#include "hetpanel/panel/case.hpp"

namespace hetpanel {

/// Writes the cases (with solved targets) to an HPDS archive at `path`,
/// atomically.  Float payloads are stored as little-endian 32-bit floats;
/// each record carries a length prefix and a CRC-32, so truncation and
/// corruption are detected with byte offsets.
void save_dataset(const std::vector<PanelCase>& cases, const std::string& path);

/// Reads an HPDS archive.  Bad magic, unsupported version, truncation, CRC
/// mismatch or topology inconsistencies throw FormatError; no partial
/// dataset is ever returned.
std::vector<PanelCase> load_dataset(const std::string& path);

}  // namespace hetpanel
