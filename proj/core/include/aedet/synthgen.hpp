#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aedet/matrix.hpp"

namespace aedet {

enum class GovernorMode { Default, Powersave, Performance };

std::string to_string(GovernorMode mode);
GovernorMode governor_from_string(const std::string& s);

// Frequency channel limits, GHz-like units. Only the correlation structure
// matters downstream, not the absolute scale.
inline constexpr double kFreqMin = 2.0;
inline constexpr double kFreqMax = 4.0;
inline constexpr double kLoadArCoeff = 0.95;
inline constexpr double kLoadNoiseStd = 0.05;
inline constexpr double kChannelNoiseFrac = 0.02;  // noise std as fraction of channel range
inline constexpr std::size_t kCoreChannels = 4;    // load, frequency, power, temperature

struct NodeProfile {
    std::string node_id;
    std::vector<double> baseline_offsets;  // per channel
    std::vector<double> gain_factors;      // per channel, strictly positive
    std::uint64_t seed = 0;
};

// Convenience: a profile whose offsets/gains are derived from the seed so
// that distinct seeds give distinct node characteristics.
NodeProfile make_node_profile(const std::string& node_id, std::uint64_t seed,
                              std::size_t dim);

// Typical swing of each channel in engineering units; baseline offsets are
// expressed in these units so they matter equally on every channel.
double channel_scale(std::size_t channel);

struct AnomalyInterval {
    std::size_t start = 0;  // inclusive
    std::size_t end = 0;    // exclusive
    GovernorMode mode = GovernorMode::Powersave;
};

using AnomalySchedule = std::vector<AnomalyInterval>;

struct LabeledTrace {
    std::string node_id;
    Matrix samples;  // T x d, engineering units
    std::vector<GovernorMode> labels;
    std::vector<bool> valid_mask;
};

// Generates one node's telemetry. Core channels: load (AR(1) clipped to
// [0,1]), frequency (load-coupled under Default, pinned low/high under
// Powersave/Performance), power (affine in load and frequency), temperature
// (lagged affine in power). Channels beyond the core are affine mixtures of
// the core plus independent noise, scaled by the profile's gains/offsets.
// Deterministic in profile.seed.
LabeledTrace generate_trace(const NodeProfile& profile, std::size_t length,
                            std::size_t dim, const AnomalySchedule& schedule,
                            double gap_fraction);

std::vector<LabeledTrace> fleet_generate(const std::vector<NodeProfile>& profiles,
                                         std::size_t length, std::size_t dim,
                                         const AnomalySchedule& schedule,
                                         double gap_fraction);

}  // namespace aedet
