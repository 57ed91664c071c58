#include "hetpanel/io/checkpoint.hpp"

#include <sstream>

#include "hetpanel/core/error.hpp"
#include "hetpanel/io/binary.hpp"

namespace hetpanel {

namespace {

constexpr char kMagic[4] = {'H', 'P', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_tensor(io::Writer& w, const Tensor& t) {
    w.u32(static_cast<std::uint32_t>(t.rank()));
    for (size_t i = 0; i < t.rank(); ++i) w.u64(static_cast<std::uint64_t>(t.dim(i)));
    for (std::int64_t i = 0; i < t.numel(); ++i) w.f64(t[i]);
}

Tensor read_tensor(io::Reader& r) {
    const std::uint32_t rank = r.u32();
    if (rank > 8) r.fail("implausible tensor rank " + std::to_string(rank));
    std::vector<std::int64_t> shape(rank);
    std::int64_t numel = rank == 0 ? 0 : 1;
    for (auto& d : shape) {
        d = r.i64();
        if (d < 0 || d > (1 << 28)) r.fail("implausible tensor dimension " + std::to_string(d));
        numel *= d;
    }
    if (static_cast<std::size_t>(numel) * 8 > r.remaining()) {
        r.fail("tensor payload of " + std::to_string(numel) + " doubles does not fit");
    }
    Tensor t(shape);
    for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = r.f64();
    return t;
}

void write_meta(io::Writer& w, const CheckpointMeta& meta, const RelationCatalog& cat) {
    w.u32(static_cast<std::uint32_t>(meta.config.layers));
    w.u32(static_cast<std::uint32_t>(meta.config.hidden));
    w.u32(static_cast<std::uint32_t>(meta.config.heads));
    w.str(meta.config.activation);
    w.f64(meta.config.lr);
    w.u32(static_cast<std::uint32_t>(meta.config.batch_size));
    w.f64(meta.config.l2);
    w.u32(static_cast<std::uint32_t>(meta.variant));
    w.u32(static_cast<std::uint32_t>(meta.channel));

    w.u32(static_cast<std::uint32_t>(cat.node_types.size()));
    for (const auto& nt : cat.node_types) {
        w.str(nt.name);
        w.u32(static_cast<std::uint32_t>(nt.feature_width));
    }
    w.u32(static_cast<std::uint32_t>(cat.relations.size()));
    for (const auto& rel : cat.relations) {
        w.str(rel.name);
        w.u32(static_cast<std::uint32_t>(rel.src_type));
        w.u32(static_cast<std::uint32_t>(rel.dst_type));
        w.i32(rel.spatial_code);
        w.u8(rel.reverse ? 1 : 0);
    }
}

struct ParsedHeader {
    CheckpointMeta meta;
    std::vector<NodeTypeInfo> node_types;
    std::vector<RelationInfo> relations;
};

ParsedHeader read_meta(io::Reader& r) {
    ParsedHeader h;
    h.meta.config.layers = static_cast<int>(r.u32());
    h.meta.config.hidden = static_cast<int>(r.u32());
    h.meta.config.heads = static_cast<int>(r.u32());
    h.meta.config.activation = r.str(64);
    h.meta.config.lr = r.f64();
    h.meta.config.batch_size = static_cast<int>(r.u32());
    h.meta.config.l2 = r.f64();
    const std::uint32_t variant = r.u32();
    if (variant > static_cast<std::uint32_t>(Variant::homogeneous)) {
        r.fail("invalid variant code " + std::to_string(variant));
    }
    h.meta.variant = static_cast<Variant>(variant);
    const std::uint32_t channel = r.u32();
    if (channel >= static_cast<std::uint32_t>(kNumChannels)) {
        r.fail("invalid channel code " + std::to_string(channel));
    }
    h.meta.channel = static_cast<Channel>(channel);

    const std::uint32_t n_types = r.u32();
    if (n_types > 64) r.fail("implausible node type count");
    for (std::uint32_t i = 0; i < n_types; ++i) {
        NodeTypeInfo nt;
        nt.name = r.str(256);
        nt.feature_width = static_cast<int>(r.u32());
        h.node_types.push_back(std::move(nt));
    }
    const std::uint32_t n_rel = r.u32();
    if (n_rel > 4096) r.fail("implausible relation count");
    for (std::uint32_t i = 0; i < n_rel; ++i) {
        RelationInfo rel;
        rel.name = r.str(256);
        rel.src_type = static_cast<int>(r.u32());
        rel.dst_type = static_cast<int>(r.u32());
        rel.spatial_code = r.i32();
        rel.reverse = r.u8() != 0;
        h.relations.push_back(std::move(rel));
    }
    return h;
}

void check_architecture(const std::string& path, const ParsedHeader& h,
                        const CheckpointMeta& expected, const RelationCatalog& expected_cat) {
    std::vector<std::string> diffs;
    const auto diff = [&](const std::string& key, const std::string& have,
                          const std::string& want) {
        diffs.push_back(key + ": checkpoint has " + have + ", requested " + want);
    };
    if (h.meta.config.layers != expected.config.layers) {
        diff("layers", std::to_string(h.meta.config.layers),
             std::to_string(expected.config.layers));
    }
    if (h.meta.config.hidden != expected.config.hidden) {
        diff("hidden", std::to_string(h.meta.config.hidden),
             std::to_string(expected.config.hidden));
    }
    if (h.meta.config.heads != expected.config.heads) {
        diff("heads", std::to_string(h.meta.config.heads), std::to_string(expected.config.heads));
    }
    if (h.meta.config.activation != expected.config.activation) {
        diff("activation", h.meta.config.activation, expected.config.activation);
    }
    if (h.meta.variant != expected.variant) {
        diff("variant", variant_name(h.meta.variant), variant_name(expected.variant));
    }
    if (h.meta.channel != expected.channel) {
        diff("channel", channel_name(h.meta.channel), channel_name(expected.channel));
    }
    if (h.node_types.size() != expected_cat.node_types.size()) {
        diff("node type count", std::to_string(h.node_types.size()),
             std::to_string(expected_cat.node_types.size()));
    } else {
        for (size_t i = 0; i < h.node_types.size(); ++i) {
            if (h.node_types[i].name != expected_cat.node_types[i].name ||
                h.node_types[i].feature_width != expected_cat.node_types[i].feature_width) {
                diff("node type " + std::to_string(i),
                     h.node_types[i].name + "/" + std::to_string(h.node_types[i].feature_width),
                     expected_cat.node_types[i].name + "/" +
                         std::to_string(expected_cat.node_types[i].feature_width));
            }
        }
    }
    if (h.relations.size() != expected_cat.relations.size()) {
        diff("relation count", std::to_string(h.relations.size()),
             std::to_string(expected_cat.relations.size()));
    } else {
        for (size_t i = 0; i < h.relations.size(); ++i) {
            if (h.relations[i].name != expected_cat.relations[i].name) {
                diff("relation " + std::to_string(i), h.relations[i].name,
                     expected_cat.relations[i].name);
            }
        }
    }
    if (!diffs.empty()) {
        std::ostringstream msg;
        msg << path << ": checkpoint does not match the requested configuration:";
        size_t shown = 0;
        for (const auto& d : diffs) {
            if (shown++ == 8) {
                msg << "\n  ... and " << diffs.size() - 8 << " more";
                break;
            }
            msg << "\n  " << d;
        }
        throw FormatError(msg.str());
    }
}

io::Reader open_checkpoint(const std::vector<std::uint8_t>& bytes, const std::string& path) {
    io::Reader r(bytes.data(), bytes.size(), path);
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.u8());
    if (std::string(magic, 4) != std::string(kMagic, 4)) {
        throw FormatError(path + ": bad magic (not an HPCK checkpoint)");
    }
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw FormatError(path + ": unsupported HPCK version " + std::to_string(version) +
                          " (supported: " + std::to_string(kVersion) + ")");
    }
    if (bytes.size() < 12) r.fail("file too short for the CRC trailer");
    const std::size_t payload = bytes.size() - 12;
    const std::uint32_t stored =
        static_cast<std::uint32_t>(bytes[bytes.size() - 4]) << 24 |
        static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 16 |
        static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 8 |
        static_cast<std::uint32_t>(bytes[bytes.size() - 1]);
    const std::uint32_t actual = io::crc32_of(bytes.data() + 8, payload);
    if (stored != actual) {
        throw FormatError(path + ": payload CRC mismatch (file corrupted)");
    }
    return r;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const RelationCatalog& catalog, const ParamStore& store,
                     const AdamState* optimizer) {
    io::Writer w;
    w.raw(kMagic, 4);
    w.u32(kVersion);
    write_meta(w, meta, catalog);

    w.u32(static_cast<std::uint32_t>(store.count()));
    for (int i = 0; i < store.count(); ++i) {
        w.str(store.name(i));
        w.u8(store.decay_exempt(i) ? 1 : 0);
        write_tensor(w, store.value(i));
    }
    w.u32(static_cast<std::uint32_t>(store.buffer_count()));
    for (int i = 0; i < store.buffer_count(); ++i) {
        w.str(store.buffer_name(i));
        write_tensor(w, store.buffer(i));
    }
    w.u8(optimizer != nullptr ? 1 : 0);
    if (optimizer != nullptr) {
        w.u64(static_cast<std::uint64_t>(optimizer->step_count()));
        for (int i = 0; i < store.count(); ++i) {
            write_tensor(w, optimizer->first_moment(i));
            write_tensor(w, optimizer->second_moment(i));
        }
    }

    // CRC over everything after magic+version, big-endian stored at the tail
    // so the reader can verify before parsing.
    const std::uint32_t crc = io::crc32_of(w.bytes().data() + 8, w.size() - 8);
    w.u8(static_cast<std::uint8_t>(crc >> 24));
    w.u8(static_cast<std::uint8_t>(crc >> 16));
    w.u8(static_cast<std::uint8_t>(crc >> 8));
    w.u8(static_cast<std::uint8_t>(crc));

    io::write_file_atomic(path, w.bytes());
}

CheckpointInfo load_checkpoint(const std::string& path, const CheckpointMeta& expected,
                               const RelationCatalog& expected_catalog, ParamStore& store,
                               AdamState* optimizer) {
    const std::vector<std::uint8_t> bytes = io::read_file(path);
    io::Reader r = open_checkpoint(bytes, path);
    const ParsedHeader h = read_meta(r);
    check_architecture(path, h, expected, expected_catalog);

    const std::uint32_t n_params = r.u32();
    if (static_cast<int>(n_params) != store.count()) {
        throw FormatError(path + ": parameter count mismatch: checkpoint has " +
                          std::to_string(n_params) + ", model has " +
                          std::to_string(store.count()));
    }
    std::vector<bool> seen(static_cast<size_t>(store.count()), false);
    std::vector<std::string> unknown;
    for (std::uint32_t i = 0; i < n_params; ++i) {
        const std::string name = r.str(512);
        const bool exempt = r.u8() != 0;
        Tensor t = read_tensor(r);
        const int id = store.find(name);
        if (id < 0) {
            unknown.push_back(name);
            continue;
        }
        if (!t.same_shape(store.value(id))) {
            throw FormatError(path + ": parameter '" + name + "' has shape " + t.shape_str() +
                              ", model expects " + store.value(id).shape_str());
        }
        if (exempt != store.decay_exempt(id)) {
            throw FormatError(path + ": parameter '" + name + "' decay flag mismatch");
        }
        store.value(id) = std::move(t);
        seen[static_cast<size_t>(id)] = true;
    }
    std::vector<std::string> missing;
    for (int i = 0; i < store.count(); ++i) {
        if (!seen[static_cast<size_t>(i)]) missing.push_back(store.name(i));
    }
    if (!unknown.empty() || !missing.empty()) {
        std::ostringstream msg;
        msg << path << ": parameter key mismatch";
        if (!unknown.empty()) {
            msg << "; checkpoint-only keys:";
            for (size_t i = 0; i < unknown.size() && i < 4; ++i) msg << " " << unknown[i];
        }
        if (!missing.empty()) {
            msg << "; model-only keys:";
            for (size_t i = 0; i < missing.size() && i < 4; ++i) msg << " " << missing[i];
        }
        throw FormatError(msg.str());
    }

    const std::uint32_t n_buffers = r.u32();
    if (static_cast<int>(n_buffers) != store.buffer_count()) {
        throw FormatError(path + ": buffer count mismatch: checkpoint has " +
                          std::to_string(n_buffers) + ", model has " +
                          std::to_string(store.buffer_count()));
    }
    for (std::uint32_t i = 0; i < n_buffers; ++i) {
        const std::string name = r.str(512);
        Tensor t = read_tensor(r);
        const int id = store.find_buffer(name);
        if (id < 0) throw FormatError(path + ": unknown buffer '" + name + "'");
        if (!t.same_shape(store.buffer(id))) {
            throw FormatError(path + ": buffer '" + name + "' has shape " + t.shape_str() +
                              ", model expects " + store.buffer(id).shape_str());
        }
        store.buffer(id) = std::move(t);
    }

    CheckpointInfo info;
    info.meta = h.meta;
    info.has_optimizer = r.u8() != 0;
    if (info.has_optimizer) {
        info.optimizer_step = static_cast<std::int64_t>(r.u64());
        std::vector<Tensor> m, v;
        for (int i = 0; i < store.count(); ++i) {
            m.push_back(read_tensor(r));
            v.push_back(read_tensor(r));
        }
        if (optimizer != nullptr) {
            optimizer->restore(std::move(m), std::move(v), info.optimizer_step);
        }
    }
    if (r.remaining() != 4) {
        r.fail(std::to_string(r.remaining()) + " unexpected bytes before the CRC trailer");
    }
    return info;
}

CheckpointInfo peek_checkpoint(const std::string& path) {
    const std::vector<std::uint8_t> bytes = io::read_file(path);
    io::Reader r = open_checkpoint(bytes, path);
    const ParsedHeader h = read_meta(r);
    CheckpointInfo info;
    info.meta = h.meta;
    const std::uint32_t n_params = r.u32();
    for (std::uint32_t i = 0; i < n_params; ++i) {
        r.str(512);
        r.u8();
        read_tensor(r);
    }
    const std::uint32_t n_buffers = r.u32();
    for (std::uint32_t i = 0; i < n_buffers; ++i) {
        r.str(512);
        read_tensor(r);
    }
    info.has_optimizer = r.u8() != 0;
    if (info.has_optimizer) info.optimizer_step = static_cast<std::int64_t>(r.u64());
    return info;
}

}  // namespace hetpanel
