#include "kahfm/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kahfm {

namespace {

constexpr const char* kMagic = "KAHFM-MODEL";
constexpr int kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
    std::uint64_t v = std::bit_cast<std::uint64_t>(d);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_str(std::ostream& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

struct Reader {
    std::ifstream in;
    std::string path;

    [[noreturn]] void fail(const std::string& what) {
        in.clear();  // a failed read poisons tellg
        auto off = in.tellg();
        throw std::runtime_error(path + ": " + what + " at offset " +
                                 std::to_string(static_cast<long long>(off)));
    }

    std::uint32_t u32() {
        unsigned char b[4];
        if (!in.read(reinterpret_cast<char*>(b), 4)) fail("truncated (u32)");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    }

    double f64() {
        unsigned char b[8];
        if (!in.read(reinterpret_cast<char*>(b), 8)) fail("truncated (f64)");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return std::bit_cast<double>(v);
    }

    std::string str() {
        std::uint32_t len = u32();
        std::string s(len, '\0');
        if (len > 0 && !in.read(s.data(), len)) fail("truncated (string)");
        return s;
    }
};

}  // namespace

void save_model(const FMParams& params, const ModelMeta& meta, const std::string& path) {
    std::ostringstream buf(std::ios::binary);
    buf << kMagic << " " << kVersion << "\n";
    buf << params.n << " " << params.k << " " << meta.userIds.size() << " "
        << meta.itemIds.size() << " " << meta.table.size() << "\n";

    put_f64(buf, params.w0);
    for (double v : params.w) put_f64(buf, v);
    for (double v : params.V) put_f64(buf, v);
    for (const auto& f : meta.table.features) {
        put_str(buf, f.predicate);
        put_str(buf, f.object);
    }
    for (const auto& id : meta.userIds) put_str(buf, id);
    for (const auto& id : meta.itemIds) put_str(buf, id);
    put_str(buf, meta.fingerprint);

    // whole-file write keeps a failed save from leaving a partial model
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    const std::string bytes = buf.str();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to model file: " + path);
}

LoadedModel load_model(const std::string& path) {
    Reader r{std::ifstream(path, std::ios::binary), path};
    if (!r.in) throw std::runtime_error("cannot open model file: " + path);

    std::string magic;
    int version = 0;
    r.in >> magic >> version;
    if (magic != kMagic) throw std::runtime_error(path + ": bad magic '" + magic + "'");
    if (version != kVersion)
        throw std::runtime_error(path + ": unsupported version " + std::to_string(version));

    LoadedModel m;
    std::size_t numUsers = 0, numItems = 0, numFeatures = 0;
    r.in >> m.params.n >> m.params.k >> numUsers >> numItems >> numFeatures;
    if (!r.in) r.fail("malformed header");
    r.in.get();  // newline after header

    m.params.w0 = r.f64();
    m.params.w.resize(m.params.n);
    for (auto& v : m.params.w) v = r.f64();
    m.params.V.resize(static_cast<std::size_t>(m.params.n) * m.params.k);
    for (auto& v : m.params.V) v = r.f64();

    for (std::size_t i = 0; i < numFeatures; ++i) {
        Feature f;
        f.predicate = r.str();
        f.object = r.str();
        m.meta.table.index.emplace(f, static_cast<int>(i));
        m.meta.table.features.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < numUsers; ++i) m.meta.userIds.push_back(r.str());
    for (std::size_t i = 0; i < numItems; ++i) m.meta.itemIds.push_back(r.str());
    m.meta.fingerprint = r.str();
    return m;
}

}  // namespace kahfm
