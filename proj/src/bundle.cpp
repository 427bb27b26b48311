#include "xkws/bundle.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <iterator>

#include "xkws/error.hpp"

namespace xkws {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'I', 'X'};
constexpr std::size_t kHeaderSize = 24;

enum SectionTag : std::uint32_t {
    kConf = 0x464E4F43,  // "CONF"
    kTree = 0x45455254,  // "TREE"
    kSchema = 0x4D484353,  // "SCHM"
    kSchemaIndex = 0x58444953,  // "SIDX"
    kInstanceIndex = 0x58444949,  // "IIDX"
};

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void ids(std::span<const std::uint32_t> v) {
        for (auto x : v) u32(x);
    }
    void section(std::uint32_t tag, const Writer& body) {
        u32(tag);
        u64(body.buf_.size());
        buf_.insert(buf_.end(), body.buf_.begin(), body.buf_.end());
    }
    std::vector<std::uint8_t>& bytes() { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : p_(data), end_(data + size) {}

    std::uint8_t u8() {
        need(1);
        return *p_++;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p_[i]) << (8 * i);
        p_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p_[i]) << (8 * i);
        p_ += 8;
        return v;
    }
    std::string str() {
        auto n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(p_), n);
        p_ += n;
        return s;
    }
    std::vector<std::uint32_t> ids(std::size_t n) {
        need(n * 4);
        std::vector<std::uint32_t> v(n);
        for (auto& x : v) x = u32();
        return v;
    }
    Reader section(std::uint32_t expected_tag) {
        auto tag = u32();
        if (tag != expected_tag) throw BundleError(BundleError::Kind::Format, "unexpected section");
        auto len = u64();
        need(len);
        Reader body(p_, static_cast<std::size_t>(len));
        p_ += len;
        return body;
    }
    bool done() const { return p_ == end_; }

private:
    void need(std::uint64_t n) const {
        if (static_cast<std::uint64_t>(end_ - p_) < n)
            throw BundleError(BundleError::Kind::Truncated, "bundle record runs past its section");
    }
    const std::uint8_t* p_;
    const std::uint8_t* end_;
};

std::uint32_t crc_of(const std::uint8_t* data, std::size_t n) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks for large bundles.
    while (n > 0) {
        uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
        crc = crc32(crc, data, chunk);
        data += chunk;
        n -= chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

template <class Posting, class WritePosting>
void write_index(Writer& w, const InvertedIndex<Posting>& idx, WritePosting&& write_posting) {
    w.u32(static_cast<std::uint32_t>(idx.term_count()));
    for (const auto& [term, list] : idx.lists()) {
        w.str(term);
        w.u32(static_cast<std::uint32_t>(list.size()));
        for (const auto& p : list.postings()) write_posting(w, p);
    }
}

}  // namespace

IndexBundle build_bundle(InstanceTree tree) {
    IndexBundle b;
    b.dataguide = build_dataguide(tree);
    b.schema_index = build_schema_index(b.dataguide);
    b.instance_index = build_instance_index(tree, b.dataguide);
    b.tree = std::move(tree);
    return b;
}

std::vector<std::uint8_t> serialize_bundle(const IndexBundle& b) {
    Writer conf;
    conf.u8(b.tree.config().case_sensitive ? 1 : 0);
    conf.u8(b.tree.config().index_labels ? 1 : 0);

    Writer tree;
    tree.u32(static_cast<std::uint32_t>(b.tree.size()));
    for (const auto& n : b.tree.nodes()) {
        tree.u8(static_cast<std::uint8_t>(n.kind));
        tree.u32(n.parent ? *n.parent + 1 : 0);
        tree.str(n.label);
        tree.u32(static_cast<std::uint32_t>(n.texts.size()));
        for (const auto& t : n.texts) tree.str(t);
        tree.u32(static_cast<std::uint32_t>(n.content.size()));
        for (const auto& c : n.content) {
            tree.u8(c.is_text ? 1 : 0);
            tree.u32(c.ref);
        }
    }

    Writer schema;
    schema.u32(static_cast<std::uint32_t>(b.dataguide.size()));
    for (const auto& s : b.dataguide.nodes()) {
        schema.u8(static_cast<std::uint8_t>(s.kind));
        schema.u32(s.parent ? *s.parent + 1 : 0);
        schema.str(s.label);
        schema.u32(static_cast<std::uint32_t>(s.keywords.size()));
        for (const auto& k : s.keywords) schema.str(k);
    }
    schema.u32(static_cast<std::uint32_t>(b.dataguide.instance_map().size()));
    schema.ids(b.dataguide.instance_map());

    Writer sidx;
    write_index(sidx, b.schema_index, [](Writer& w, const SchemaPosting& p) {
        w.u32(p.snode_id);
        w.u32(static_cast<std::uint32_t>(p.numeric_label_path.size()));
        w.ids(p.numeric_label_path);
    });
    Writer iidx;
    write_index(iidx, b.instance_index, [](Writer& w, const InstancePosting& p) {
        w.u32(p.inode_id);
        w.u32(static_cast<std::uint32_t>(p.node_path.size()));
        w.ids(p.node_path);
        w.ids(p.numeric_label_path);
    });

    Writer payload;
    payload.section(kConf, conf);
    payload.section(kTree, tree);
    payload.section(kSchema, schema);
    payload.section(kSchemaIndex, sidx);
    payload.section(kInstanceIndex, iidx);
    auto& body = payload.bytes();

    Writer out;
    for (char c : kMagic) out.u8(static_cast<std::uint8_t>(c));
    out.u32(kBundleVersion);
    out.u64(body.size());
    out.u32(crc_of(body.data(), body.size()));
    out.u32(0);
    auto& bytes = out.bytes();
    bytes.insert(bytes.end(), body.begin(), body.end());
    return std::move(bytes);
}

IndexBundle deserialize_bundle(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kHeaderSize)
        throw BundleError(BundleError::Kind::Truncated, "bundle shorter than its header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw BundleError(BundleError::Kind::Format, "not a .tsix bundle");
    Reader header(bytes.data() + 4, kHeaderSize - 4);
    auto version = header.u32();
    auto length = header.u64();
    auto crc = header.u32();
    if (version != kBundleVersion)
        throw BundleError(BundleError::Kind::Version,
                          "bundle version " + std::to_string(version) + ", reader expects " +
                              std::to_string(kBundleVersion));
    if (bytes.size() - kHeaderSize < length)
        throw BundleError(BundleError::Kind::Truncated, "bundle payload is truncated");
    if (bytes.size() - kHeaderSize > length)
        throw BundleError(BundleError::Kind::Format, "trailing bytes after bundle payload");
    const std::uint8_t* body = bytes.data() + kHeaderSize;
    if (crc_of(body, length) != crc)
        throw BundleError(BundleError::Kind::Checksum, "bundle checksum mismatch");

    Reader payload(body, length);
    IndexBundle b;

    auto conf = payload.section(kConf);
    TokenizerConfig cfg;
    cfg.case_sensitive = conf.u8() != 0;
    cfg.index_labels = conf.u8() != 0;

    auto tree = payload.section(kTree);
    std::vector<InstanceNode> nodes(tree.u32());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto& n = nodes[i];
        n.id = static_cast<InodeId>(i);
        n.kind = static_cast<NodeKind>(tree.u8());
        if (auto p = tree.u32()) {
            n.parent = p - 1;
            if (*n.parent >= i) throw BundleError(BundleError::Kind::Format, "bad parent id");
            nodes[*n.parent].children.push_back(n.id);
        }
        n.label = tree.str();
        n.texts.resize(tree.u32());
        for (auto& t : n.texts) t = tree.str();
        n.content.resize(tree.u32());
        for (auto& c : n.content) {
            c.is_text = tree.u8() != 0;
            c.ref = tree.u32();
        }
    }

    auto schema = payload.section(kSchema);
    std::vector<SchemaNode> snodes(schema.u32());
    for (std::size_t i = 0; i < snodes.size(); ++i) {
        auto& s = snodes[i];
        s.id = static_cast<SnodeId>(i);
        s.kind = static_cast<NodeKind>(schema.u8());
        if (auto p = schema.u32()) {
            s.parent = p - 1;
            if (*s.parent >= i) throw BundleError(BundleError::Kind::Format, "bad schema parent");
            snodes[*s.parent].children.push_back(s.id);
        }
        s.label = schema.str();
        s.keywords.resize(schema.u32());
        for (auto& k : s.keywords) k = schema.str();
    }
    auto instance_map = schema.ids(schema.u32());

    auto sidx = payload.section(kSchemaIndex);
    std::map<std::string, SchemaIndex::List> slists;
    for (std::uint32_t t = 0, terms = sidx.u32(); t < terms; ++t) {
        auto term = sidx.str();
        std::vector<SchemaPosting> ps(sidx.u32());
        for (auto& p : ps) {
            p.snode_id = sidx.u32();
            p.numeric_label_path = sidx.ids(sidx.u32());
        }
        slists.emplace(term, SchemaIndex::List(term, std::move(ps)));
    }

    auto iidx = payload.section(kInstanceIndex);
    std::map<std::string, InstanceIndex::List> ilists;
    for (std::uint32_t t = 0, terms = iidx.u32(); t < terms; ++t) {
        auto term = iidx.str();
        std::vector<InstancePosting> ps(iidx.u32());
        for (auto& p : ps) {
            p.inode_id = iidx.u32();
            auto len = iidx.u32();
            p.node_path = iidx.ids(len);
            p.numeric_label_path = iidx.ids(len);
        }
        ilists.emplace(term, InstanceIndex::List(term, std::move(ps)));
    }
    if (!payload.done()) throw BundleError(BundleError::Kind::Format, "unknown trailing section");

    try {
        b.tree = InstanceTree(std::move(nodes), cfg);
        b.dataguide = DataGuidePlus(std::move(snodes), std::move(instance_map));
    } catch (const ContractError& e) {
        throw BundleError(BundleError::Kind::Format, std::string("inconsistent bundle: ") + e.what());
    }
    b.schema_index = SchemaIndex(std::move(slists));
    b.instance_index = InstanceIndex(std::move(ilists));
    return b;
}

void save_bundle(const IndexBundle& bundle, const std::filesystem::path& path) {
    auto bytes = serialize_bundle(bundle);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw BundleError(BundleError::Kind::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw BundleError(BundleError::Kind::Io, "short write to " + path.string());
}

IndexBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BundleError(BundleError::Kind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    return deserialize_bundle(bytes);
}

}  // namespace xkws
