#include "aedet/modelstore.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace aedet {

namespace {

constexpr std::array<char, 8> kMagic = {'A', 'E', 'D', 'E', 'T', 'E', 'C', 'T'};
constexpr std::uint32_t kVersion = 1;

// Standard CRC-32 (reflected, polynomial 0xEDB88320).
std::uint32_t crc32(const std::uint8_t* data, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i)
        crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i)
            buf_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }
    void f64_array(const std::vector<double>& v) {
        for (double x : v) f64(x);
    }
    const std::vector<std::uint8_t>& data() const { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::vector<std::uint8_t> buf) : buf_(std::move(buf)) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(buf_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(buf_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(bits);
    }
    void bytes(void* p, std::size_t n) {
        need(n);
        std::memcpy(p, buf_.data() + pos_, n);
        pos_ += n;
    }
    void f64_array(std::vector<double>& v, std::size_t n) {
        v.resize(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f64();
    }
    std::size_t pos() const { return pos_; }
    const std::vector<std::uint8_t>& raw() const { return buf_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > buf_.size())
            throw ModelStoreError(ModelIoError::Truncated, "model file truncated");
    }
    std::vector<std::uint8_t> buf_;
    std::size_t pos_ = 0;
};

void check_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x))
            throw ModelStoreError(ModelIoError::NonFinite, "non-finite parameter");
}

}  // namespace

void save_model(const AutoencoderModel& model,
                const std::optional<DetectorProfile>& profile,
                const std::string& path) {
    check_finite(model.w1.data);
    check_finite(model.b1);
    check_finite(model.w2.data);
    check_finite(model.b2);
    if (model.norm.dim() != model.d)
        throw ModelStoreError(ModelIoError::Io, "norm stats dim mismatch");

    Writer w;
    w.bytes(kMagic.data(), kMagic.size());
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(model.d));
    w.u32(static_cast<std::uint32_t>(model.h));
    w.f64(model.l1_lambda);
    w.f64_array(model.norm.min);
    w.f64_array(model.norm.max);
    w.f64_array(model.w1.data);
    w.f64_array(model.b1);
    w.f64_array(model.w2.data);
    w.f64_array(model.b2);
    if (profile) {
        std::uint8_t flag = 1;
        w.bytes(&flag, 1);
        w.u32(static_cast<std::uint32_t>(profile->node_id.size()));
        w.bytes(profile->node_id.data(), profile->node_id.size());
        w.f64(profile->theta);
        w.f64(profile->percentile_n);
        w.f64(profile->train_error_mean);
    } else {
        std::uint8_t flag = 0;
        w.bytes(&flag, 1);
    }
    std::uint32_t crc = crc32(w.data().data(), w.data().size());

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelStoreError(ModelIoError::Io, "cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(w.data().data()),
              static_cast<std::streamsize>(w.data().size()));
    char crc_bytes[4];
    for (int i = 0; i < 4; ++i) crc_bytes[i] = static_cast<char>(crc >> (8 * i));
    out.write(crc_bytes, 4);
    if (!out) throw ModelStoreError(ModelIoError::Io, "write failed: " + path);
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelStoreError(ModelIoError::Io, "cannot open model file: " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());

    constexpr std::size_t kHeaderSize = 8 + 4 + 4 + 4 + 8;  // magic..l1_lambda
    if (buf.size() < kHeaderSize + 1 + 4)
        throw ModelStoreError(ModelIoError::Truncated, "model file truncated");
    if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0)
        throw ModelStoreError(ModelIoError::BadMagic, "bad magic bytes");

    auto read_u32_at = [&](std::size_t off) {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(buf[off + i]) << (8 * i);
        return v;
    };
    std::uint32_t version = read_u32_at(8);
    if (version != kVersion)
        throw ModelStoreError(ModelIoError::UnknownVersion,
                              "unknown format version " + std::to_string(version));
    std::size_t d = read_u32_at(12);
    std::size_t h = read_u32_at(16);

    // Minimal size with an empty profile section; a short file is reported
    // as truncation rather than a checksum failure.
    std::size_t min_size = kHeaderSize + (2 * d + h * d + h + d * h + d) * 8 + 1 + 4;
    if (buf.size() < min_size)
        throw ModelStoreError(ModelIoError::Truncated, "model file truncated");

    // Checksum covers everything before the trailing CRC.
    std::uint32_t stored = read_u32_at(buf.size() - 4);
    std::uint32_t actual = crc32(buf.data(), buf.size() - 4);
    if (stored != actual)
        throw ModelStoreError(ModelIoError::ChecksumMismatch, "checksum mismatch");

    buf.resize(buf.size() - 4);
    Reader r(std::move(buf));
    char magic[8];
    r.bytes(magic, 8);
    r.u32();  // version
    r.u32();  // d
    r.u32();  // h

    LoadedModel out;
    out.model = make_model(d, h, 0.0);
    out.model.l1_lambda = r.f64();
    r.f64_array(out.model.norm.min, d);
    r.f64_array(out.model.norm.max, d);
    r.f64_array(out.model.w1.data, h * d);
    r.f64_array(out.model.b1, h);
    r.f64_array(out.model.w2.data, d * h);
    r.f64_array(out.model.b2, d);

    std::uint8_t flag = 0;
    r.bytes(&flag, 1);
    if (flag == 1) {
        DetectorProfile p;
        std::uint32_t len = r.u32();
        p.node_id.resize(len);
        r.bytes(p.node_id.data(), len);
        p.theta = r.f64();
        p.percentile_n = r.f64();
        p.train_error_mean = r.f64();
        out.profile = p;
    }
    if (r.pos() != r.raw().size())
        throw ModelStoreError(ModelIoError::Truncated, "trailing bytes in model file");
    return out;
}

}  // namespace aedet
