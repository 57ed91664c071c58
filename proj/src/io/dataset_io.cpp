#include "hetpanel/io/dataset_io.hpp"

#include "hetpanel/core/error.hpp"
#include "hetpanel/io/binary.hpp"

namespace hetpanel {

namespace {

constexpr char kMagic[4] = {'H', 'P', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

void write_record(io::Writer& w, const PanelCase& pc) {
    io::Writer body;
    const PanelGeometry& g = pc.geometry;
    body.f32(static_cast<float>(g.length_m));
    body.f32(static_cast<float>(g.width_m));
    body.f32(static_cast<float>(g.plate_thickness_mm));
    body.f32(static_cast<float>(g.web_thickness_mm));
    body.f32(static_cast<float>(g.web_height_mm));
    body.f32(static_cast<float>(g.flange_thickness_mm));
    body.f32(static_cast<float>(g.flange_width_mm));
    body.u32(static_cast<std::uint32_t>(g.n_stiffeners));

    const MaterialLaw& m = pc.material;
    body.f32(static_cast<float>(m.youngs_modulus_pa));
    body.f32(static_cast<float>(m.poisson_ratio));
    body.f32(static_cast<float>(m.yield_stress_pa));
    body.f32(static_cast<float>(m.hardening_coeff_pa));
    body.f32(static_cast<float>(m.hardening_exponent));
    body.f32(static_cast<float>(m.plateau_strain));

    body.u32(static_cast<std::uint32_t>(pc.edge_bcs.size()));
    for (const EdgeBC& bc : pc.edge_bcs) {
        body.u32(static_cast<std::uint32_t>(bc.edge_id));
        for (int d = 0; d < kNumDofs; ++d) {
            body.u8(bc.known[static_cast<size_t>(d)] ? 1 : 0);
        }
        for (int d = 0; d < kNumDofs; ++d) {
            for (int s = 0; s < kProfileSamples; ++s) {
                body.f32(static_cast<float>(bc.profiles[static_cast<size_t>(d)][static_cast<size_t>(s)]));
            }
        }
    }

    body.u32(static_cast<std::uint32_t>(pc.loads.size()));
    for (const LoadProfile& lp : pc.loads) {
        body.u32(static_cast<std::uint32_t>(lp.unit_id));
        for (int s = 0; s < kProfileSamples; ++s) {
            body.f32(static_cast<float>(lp.samples[static_cast<size_t>(s)]));
        }
    }

    body.u32(static_cast<std::uint32_t>(pc.targets.size()));
    for (const FieldGrid& fg : pc.targets) {
        body.u32(static_cast<std::uint32_t>(fg.unit_id));
        for (const double v : fg.data) body.f32(static_cast<float>(v));
    }

    w.u32(static_cast<std::uint32_t>(body.size()));
    w.raw(body.bytes().data(), body.size());
    w.u32(io::crc32_of(body.bytes().data(), body.size()));
}

PanelCase read_record(io::Reader& r, std::size_t record_index) {
    const std::uint32_t block_len = r.u32();
    if (r.remaining() < static_cast<std::size_t>(block_len) + 4) {
        r.fail("record " + std::to_string(record_index) + " is truncated (declared " +
               std::to_string(block_len) + " payload bytes)");
    }
    const std::size_t body_start = r.offset();

    PanelCase pc;
    PanelGeometry& g = pc.geometry;
    g.length_m = r.f32();
    g.width_m = r.f32();
    g.plate_thickness_mm = r.f32();
    g.web_thickness_mm = r.f32();
    g.web_height_mm = r.f32();
    g.flange_thickness_mm = r.f32();
    g.flange_width_mm = r.f32();
    g.n_stiffeners = static_cast<int>(r.u32());

    MaterialLaw& m = pc.material;
    m.youngs_modulus_pa = r.f32();
    m.poisson_ratio = r.f32();
    m.yield_stress_pa = r.f32();
    m.hardening_coeff_pa = r.f32();
    m.hardening_exponent = r.f32();
    m.plateau_strain = r.f32();

    const std::uint32_t n_edges = r.u32();
    if (n_edges > 1u << 16) r.fail("implausible edge count " + std::to_string(n_edges));
    pc.edge_bcs.resize(n_edges);
    for (std::uint32_t e = 0; e < n_edges; ++e) {
        EdgeBC& bc = pc.edge_bcs[e];
        bc.edge_id = static_cast<int>(r.u32());
        for (int d = 0; d < kNumDofs; ++d) bc.known[static_cast<size_t>(d)] = r.u8() != 0;
        for (int d = 0; d < kNumDofs; ++d) {
            for (int s = 0; s < kProfileSamples; ++s) {
                bc.profiles[static_cast<size_t>(d)][static_cast<size_t>(s)] = r.f32();
            }
        }
    }

    const std::uint32_t n_loads = r.u32();
    if (n_loads > 1u << 16) r.fail("implausible load count " + std::to_string(n_loads));
    pc.loads.resize(n_loads);
    for (std::uint32_t i = 0; i < n_loads; ++i) {
        pc.loads[i].unit_id = static_cast<int>(r.u32());
        for (int s = 0; s < kProfileSamples; ++s) {
            pc.loads[i].samples[static_cast<size_t>(s)] = r.f32();
        }
    }

    const std::uint32_t n_units = r.u32();
    if (n_units > 1u << 16) r.fail("implausible unit count " + std::to_string(n_units));
    pc.targets.reserve(n_units);
    for (std::uint32_t u = 0; u < n_units; ++u) {
        FieldGrid fg;
        fg.unit_id = static_cast<int>(r.u32());
        for (double& v : fg.data) v = r.f32();
        pc.targets.push_back(std::move(fg));
    }

    const std::size_t body_end = r.offset();
    if (body_end - body_start != block_len) {
        r.fail("record " + std::to_string(record_index) + " length mismatch: declared " +
               std::to_string(block_len) + ", parsed " + std::to_string(body_end - body_start));
    }
    return pc;
}

}  // namespace

void save_dataset(const std::vector<PanelCase>& cases, const std::string& path) {
    io::Writer w;
    w.raw(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(cases.size()));
    w.u32(FieldGrid::kRows);
    w.u32(FieldGrid::kCols);
    w.u32(kNumChannels);
    w.u32(kProfileSamples);
    for (const PanelCase& pc : cases) write_record(w, pc);
    io::write_file_atomic(path, w.bytes());
}

std::vector<PanelCase> load_dataset(const std::string& path) {
    const std::vector<std::uint8_t> bytes = io::read_file(path);
    io::Reader r(bytes.data(), bytes.size(), path);
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.u8());
    if (std::string(magic, 4) != std::string(kMagic, 4)) {
        throw FormatError(path + ": bad magic (not an HPDS dataset archive)");
    }
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw FormatError(path + ": unsupported HPDS version " + std::to_string(version) +
                          " (supported: " + std::to_string(kVersion) + ")");
    }
    const std::uint32_t count = r.u32();
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    const std::uint32_t channels = r.u32();
    const std::uint32_t samples = r.u32();
    if (rows != FieldGrid::kRows || cols != FieldGrid::kCols || channels != kNumChannels ||
        samples != kProfileSamples) {
        throw FormatError(path + ": schema descriptor mismatch (grid " + std::to_string(rows) +
                          "x" + std::to_string(cols) + ", " + std::to_string(channels) +
                          " channels, " + std::to_string(samples) + " profile samples)");
    }

    std::vector<PanelCase> cases;
    cases.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::size_t body_start_probe = r.offset() + 4;
        PanelCase pc = read_record(r, i);
        const std::size_t body_len = r.offset() - body_start_probe;
        const std::uint32_t stored_crc = r.u32();
        const std::uint32_t actual_crc =
            io::crc32_of(bytes.data() + body_start_probe, body_len);
        if (stored_crc != actual_crc) {
            throw FormatError(path + ": CRC mismatch in record " + std::to_string(i) +
                              " at byte offset " + std::to_string(body_start_probe));
        }
        cases.push_back(std::move(pc));
    }
    if (!r.at_end()) {
        r.fail(std::to_string(r.remaining()) + " trailing bytes after the last record");
    }
    return cases;
}

}  // namespace hetpanel
