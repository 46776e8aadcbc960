#include "knnn/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "knnn/errors.hpp"

namespace knnn {

namespace {

constexpr char kMagic[4] = {'K', 'N', 'N', 'N'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint32_t kFloorPolicyRelative1e6 = 1;

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t size) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= data[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

class Writer {
public:
    void u16(std::uint16_t v) { le(v); }
    void u32(std::uint32_t v) { le(v); }
    void u64(std::uint64_t v) { le(v); }
    void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const void* p, std::size_t size) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + size);
    }
    const std::vector<std::uint8_t>& data() const { return buf_; }

private:
    template <class T>
    void le(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i)
            buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::vector<std::uint8_t> buf) : buf_(std::move(buf)) {}

    std::uint16_t u16() { return le<std::uint16_t>(); }
    std::uint32_t u32() { return le<std::uint32_t>(); }
    std::uint64_t u64() { return le<std::uint64_t>(); }
    double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
    void bytes(void* p, std::size_t size) {
        need(size);
        std::memcpy(p, buf_.data() + pos_, size);
        pos_ += size;
    }
    std::size_t pos() const { return pos_; }
    std::size_t size() const { return buf_.size(); }
    const std::uint8_t* raw() const { return buf_.data(); }

private:
    void need(std::size_t size) {
        if (pos_ + size > buf_.size())
            throw TruncatedFile("model file truncated at byte " + std::to_string(pos_));
    }
    template <class T>
    T le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<T>(buf_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return v;
    }

    std::vector<std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

} // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    const std::size_t rows = model.train.rows();
    const std::size_t dim = model.train.cols();
    const std::size_t sets = model.plan.set_count();

    Writer w;
    w.bytes(kMagic, 4);
    w.u16(kVersion);
    w.u32(static_cast<std::uint32_t>(dim));
    w.u32(static_cast<std::uint32_t>(rows));
    w.u32(model.plan.set_width);
    w.u32(static_cast<std::uint32_t>(sets));
    w.u32(model.k_nnn);
    w.u32(model.n);
    w.u32(kFloorPolicyRelative1e6);
    for (auto idx : model.plan.permutation) w.u32(idx);
    for (double v : model.train.data()) w.f64(v);
    for (const auto& pack : model.packs) {
        for (double v : pack.values) w.f64(v);
        for (double v : pack.vectors) w.f64(v);
    }
    w.u64(fnv1a(w.data().data(), w.data().size()));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw TruncatedFile("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(w.data().data()),
              static_cast<std::streamsize>(w.data().size()));
    if (!out) throw TruncatedFile("short write: " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TruncatedFile("cannot open: " + path.string());
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (buf.size() < 4 + 2 + 7 * 4 + 8)
        throw TruncatedFile("model file too small: " + path.string());

    Reader r(std::move(buf));
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw UnsupportedVersion("not a model file (bad magic)");
    const std::uint16_t version = r.u16();
    if (version != kVersion)
        throw UnsupportedVersion("unsupported model version " + std::to_string(version));

    const std::uint32_t dim = r.u32();
    const std::uint32_t rows = r.u32();
    const std::uint32_t set_width = r.u32();
    const std::uint32_t sets = r.u32();
    const std::uint32_t k_nnn = r.u32();
    const std::uint32_t n = r.u32();
    const std::uint32_t floor_policy = r.u32();
    if (floor_policy != kFloorPolicyRelative1e6)
        throw UnsupportedVersion("unknown eigenvalue-floor policy " +
                                 std::to_string(floor_policy));
    if (dim == 0 || rows == 0 || set_width == 0 || set_width > dim ||
        sets != (dim + set_width - 1) / set_width)
        throw TruncatedFile("model header is structurally invalid");

    // Validate total size before reading the payload, then the checksum.
    const std::size_t n_full = std::min<std::size_t>(n, set_width);
    const std::size_t last_width = dim - (sets - 1) * set_width;
    const std::size_t n_last = std::min<std::size_t>(n, last_width);
    const std::size_t pack_doubles =
        rows * ((sets - 1) * (n_full + n_full * set_width) + (n_last + n_last * last_width));
    const std::size_t expected = 4 + 2 + 7 * 4 + std::size_t{4} * dim +
                                 8 * (std::size_t{rows} * dim + pack_doubles) + 8;
    if (r.size() != expected)
        throw TruncatedFile("model file size " + std::to_string(r.size()) +
                            " does not match header (expected " +
                            std::to_string(expected) + ")");
    std::uint64_t checksum_stored = 0;
    for (std::size_t i = 0; i < 8; ++i)
        checksum_stored |= static_cast<std::uint64_t>(r.raw()[r.size() - 8 + i]) << (8 * i);
    if (fnv1a(r.raw(), r.size() - 8) != checksum_stored)
        throw ChecksumMismatch("model file checksum mismatch");

    TrainedModel model;
    model.k_nnn = k_nnn;
    model.n = n;
    model.plan.set_width = set_width;
    model.plan.permutation.resize(dim);
    for (auto& idx : model.plan.permutation) idx = r.u32();

    std::vector<double> data(std::size_t{rows} * dim);
    for (auto& v : data) v = r.f64();
    model.train = FeatureMatrix(dim, std::move(data));

    model.packs.resize(std::size_t{rows} * sets);
    for (std::size_t p = 0; p < rows; ++p) {
        for (std::size_t s = 0; s < sets; ++s) {
            const std::size_t width = model.plan.set_size(s);
            const std::size_t count = std::min<std::size_t>(n, width);
            auto& pack = model.packs[p * sets + s];
            pack.dim = width;
            pack.values.resize(count);
            for (auto& v : pack.values) v = r.f64();
            pack.vectors.resize(count * width);
            for (auto& v : pack.vectors) v = r.f64();
        }
    }
    return model;
}

} // namespace knnn
