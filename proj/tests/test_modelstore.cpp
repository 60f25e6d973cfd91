#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>
#include <vector>

#include "aedet/modelstore.hpp"
#include "aedet/rng.hpp"

using namespace aedet;

namespace {

AutoencoderModel sample_model(std::size_t d, std::size_t h, std::uint64_t seed) {
    auto m = make_model(d, h, 1e-4);
    init_weights(m, seed);
    Rng rng(seed + 1);
    for (auto& b : m.b1) b = rng.uniform(-0.5, 0.5);
    for (auto& b : m.b2) b = rng.uniform(-0.5, 0.5);
    m.norm.min.resize(d);
    m.norm.max.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        m.norm.min[i] = rng.uniform(-1.0, 0.0);
        m.norm.max[i] = m.norm.min[i] + rng.uniform(0.1, 2.0);
    }
    return m;
}

std::vector<char> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
}

void write_bytes(const std::string& path, const std::vector<char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("save/load round trip preserves parameters and forward outputs") {
    TempFile f("aedet_roundtrip.bin");
    auto model = sample_model(3, 6, 2);
    DetectorProfile profile{"node7", 0.123, 97.0, 0.05};
    save_model(model, profile, f.path);

    auto loaded = load_model(f.path);
    CHECK(loaded.model == model);
    REQUIRE(loaded.profile.has_value());
    CHECK(loaded.profile->node_id == "node7");
    CHECK(loaded.profile->theta == 0.123);
    CHECK(loaded.profile->percentile_n == 97.0);
    CHECK(loaded.profile->train_error_mean == 0.05);

    std::vector<double> x = {0.2, 0.4, 0.9};
    CHECK(forward(model, x).output == forward(loaded.model, x).output);
}

TEST_CASE("canonical serialization: save-load-save is byte identical") {
    TempFile f1("aedet_canon1.bin"), f2("aedet_canon2.bin");
    auto model = sample_model(4, 8, 3);
    save_model(model, std::nullopt, f1.path);
    auto loaded = load_model(f1.path);
    save_model(loaded.model, loaded.profile, f2.path);
    CHECK(read_bytes(f1.path) == read_bytes(f2.path));
}

TEST_CASE("file size matches the layout arithmetic for d=2 h=4, no profile") {
    TempFile f("aedet_size.bin");
    auto model = sample_model(2, 4, 4);
    save_model(model, std::nullopt, f.path);
    std::size_t expected = 8 + 4 + 4 + 4 + 8      // magic, version, d, h, l1
                           + 2 * 2 * 8            // norm stats
                           + (4 * 2 + 4 + 2 * 4 + 2) * 8  // W1,b1,W2,b2
                           + 1 + 4;               // flag, crc
    CHECK(std::filesystem::file_size(f.path) == expected);
}

TEST_CASE("corruption cases produce distinct errors") {
    TempFile f("aedet_corrupt.bin");
    auto model = sample_model(2, 4, 5);
    save_model(model, std::nullopt, f.path);
    auto original = read_bytes(f.path);

    SUBCASE("flipped payload byte -> checksum mismatch") {
        auto bytes = original;
        bytes[40] ^= 0x01;
        write_bytes(f.path, bytes);
        try {
            load_model(f.path);
            FAIL("expected ModelStoreError");
        } catch (const ModelStoreError& e) {
            CHECK(e.code() == ModelIoError::ChecksumMismatch);
        }
    }

    SUBCASE("bad magic") {
        auto bytes = original;
        bytes[0] = 'X';
        write_bytes(f.path, bytes);
        try {
            load_model(f.path);
            FAIL("expected ModelStoreError");
        } catch (const ModelStoreError& e) {
            CHECK(e.code() == ModelIoError::BadMagic);
        }
    }

    SUBCASE("truncation") {
        auto bytes = original;
        bytes.resize(bytes.size() - 20);
        write_bytes(f.path, bytes);
        try {
            load_model(f.path);
            FAIL("expected ModelStoreError");
        } catch (const ModelStoreError& e) {
            CHECK(e.code() == ModelIoError::Truncated);
        }
    }

    SUBCASE("unknown version") {
        auto bytes = original;
        bytes[8] = 99;  // version lives right after the magic
        write_bytes(f.path, bytes);
        try {
            load_model(f.path);
            FAIL("expected ModelStoreError");
        } catch (const ModelStoreError& e) {
            CHECK(e.code() == ModelIoError::UnknownVersion);
        }
    }
}

TEST_CASE("save rejects non-finite parameters") {
    TempFile f("aedet_nonfinite.bin");
    auto model = sample_model(2, 4, 6);
    model.w1.at(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(save_model(model, std::nullopt, f.path), ModelStoreError);
}

TEST_CASE("load of a missing file reports an io error") {
    CHECK_THROWS_AS(load_model("/nonexistent/aedet.bin"), ModelStoreError);
}
