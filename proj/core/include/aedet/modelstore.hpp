#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "aedet/autoencoder.hpp"
#include "aedet/detector.hpp"

namespace aedet {

// Binary model file, little-endian throughout:
//   magic "AEDETECT" (8 bytes)
//   u32 version = 1
//   u32 d, u32 h
//   f64 l1_lambda
//   norm min (d f64), norm max (d f64)
//   W1 (h*d f64 row-major), b1 (h f64), W2 (d*h f64 row-major), b2 (d f64)
//   profile flag (1 byte); if 1: u32 node_id length + bytes,
//     f64 theta, f64 percentile_n, f64 train_error_mean
//   CRC32 of all preceding bytes (u32)

enum class ModelIoError {
    BadMagic,
    UnknownVersion,
    ChecksumMismatch,
    Truncated,
    Io,
    NonFinite,
};

class ModelStoreError : public std::runtime_error {
public:
    ModelStoreError(ModelIoError code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ModelIoError code() const { return code_; }

private:
    ModelIoError code_;
};

struct LoadedModel {
    AutoencoderModel model;
    std::optional<DetectorProfile> profile;
};

void save_model(const AutoencoderModel& model,
                const std::optional<DetectorProfile>& profile,
                const std::string& path);

LoadedModel load_model(const std::string& path);

}  // namespace aedet
