#include "aedet/synthgen.hpp"

#include <algorithm>
#include <stdexcept>

#include "aedet/rng.hpp"

namespace aedet {

std::string to_string(GovernorMode mode) {
    switch (mode) {
        case GovernorMode::Default: return "default";
        case GovernorMode::Powersave: return "powersave";
        case GovernorMode::Performance: return "performance";
    }
    throw std::logic_error("unknown governor mode");
}

GovernorMode governor_from_string(const std::string& s) {
    if (s == "default") return GovernorMode::Default;
    if (s == "powersave") return GovernorMode::Powersave;
    if (s == "performance") return GovernorMode::Performance;
    throw std::invalid_argument("unknown governor label: " + s);
}

NodeProfile make_node_profile(const std::string& node_id, std::uint64_t seed,
                              std::size_t dim) {
    NodeProfile p;
    p.node_id = node_id;
    p.seed = seed;
    // Offsets/gains drawn from a stream separate from the sample stream so
    // nodes with different seeds get distinct physical characteristics.
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    p.baseline_offsets.resize(dim);
    p.gain_factors.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        p.baseline_offsets[i] = rng.uniform(-1.0, 1.0);
        p.gain_factors[i] = rng.uniform(0.6, 1.6);
    }
    return p;
}

namespace {

// Power model p = a*load + b*freq + c and its lagged temperature response.
constexpr double kPowerLoadCoeff = 50.0;
constexpr double kPowerFreqCoeff = 20.0;
constexpr double kPowerBase = 30.0;
constexpr double kPowerRange =
    kPowerLoadCoeff + kPowerFreqCoeff * (kFreqMax - kFreqMin);
constexpr double kTempBase = 35.0;
constexpr double kTempGain = 0.25;
constexpr double kTempLag = 0.9;

void validate_schedule(const AnomalySchedule& schedule, std::size_t length) {
    std::size_t prev_end = 0;
    bool first = true;
    for (const auto& iv : schedule) {
        if (iv.mode == GovernorMode::Default)
            throw std::invalid_argument("schedule interval with Default mode");
        if (iv.start >= iv.end)
            throw std::invalid_argument("empty or inverted schedule interval");
        if (iv.end > length)
            throw std::invalid_argument("schedule interval out of trace bounds");
        if (!first && iv.start < prev_end)
            throw std::invalid_argument("overlapping or unsorted schedule intervals");
        prev_end = iv.end;
        first = false;
    }
}

// Fixed per-channel mixture weights for filler channels, independent of the
// node seed so all nodes share the same channel structure; node identity
// enters through gains/offsets.
void mixture_weights(std::size_t channel, double w[kCoreChannels]) {
    Rng rng(0xC0FFEEULL + channel);
    for (std::size_t k = 0; k < kCoreChannels; ++k) w[k] = rng.uniform(-1.0, 1.0);
}

}  // namespace

double channel_scale(std::size_t channel) {
    switch (channel) {
        case 0: return 1.0;                      // load
        case 1: return kFreqMax - kFreqMin;      // frequency
        case 2: return kPowerRange;              // power
        case 3: return kTempGain * kPowerRange;  // temperature swing
        default: return 1.0;                     // fillers mix normalized cores
    }
}

LabeledTrace generate_trace(const NodeProfile& profile, std::size_t length,
                            std::size_t dim, const AnomalySchedule& schedule,
                            double gap_fraction) {
    if (length == 0) throw std::invalid_argument("length must be > 0");
    if (dim < 8) throw std::invalid_argument("dim must be >= 8");
    if (gap_fraction < 0.0 || gap_fraction > 1.0)
        throw std::invalid_argument("gap_fraction must be in [0,1]");
    if (profile.baseline_offsets.size() < dim || profile.gain_factors.size() < dim)
        throw std::invalid_argument("profile offsets/gains shorter than dim");
    for (std::size_t i = 0; i < dim; ++i)
        if (profile.gain_factors[i] <= 0.0)
            throw std::invalid_argument("gain_factors must be strictly positive");
    validate_schedule(schedule, length);

    LabeledTrace trace;
    trace.node_id = profile.node_id;
    trace.samples = Matrix(length, dim);
    trace.labels.assign(length, GovernorMode::Default);
    trace.valid_mask.assign(length, true);

    for (const auto& iv : schedule)
        for (std::size_t t = iv.start; t < iv.end; ++t) trace.labels[t] = iv.mode;

    Rng rng(profile.seed);

    const double freq_range = kFreqMax - kFreqMin;
    const double freq_noise = kChannelNoiseFrac * freq_range;
    const double power_noise = kChannelNoiseFrac * kPowerRange;
    const double temp_noise = kChannelNoiseFrac * (kTempGain * kPowerRange);

    double load = 0.5;
    double temp = kTempBase +
                  kTempGain * (kPowerLoadCoeff * load + kPowerFreqCoeff * 3.0 +
                               kPowerBase);
    double core[kCoreChannels];

    for (std::size_t t = 0; t < length; ++t) {
        load = kLoadArCoeff * load + (1.0 - kLoadArCoeff) * 0.5 +
               rng.gaussian(0.0, kLoadNoiseStd);
        load = std::clamp(load, 0.0, 1.0);

        double freq;
        switch (trace.labels[t]) {
            case GovernorMode::Powersave:
                freq = kFreqMin + rng.gaussian(0.0, freq_noise);
                break;
            case GovernorMode::Performance:
                freq = kFreqMax + rng.gaussian(0.0, freq_noise);
                break;
            default:
                freq = kFreqMin + load * freq_range + rng.gaussian(0.0, freq_noise);
        }

        double power = kPowerLoadCoeff * load + kPowerFreqCoeff * freq +
                       kPowerBase + rng.gaussian(0.0, power_noise);
        temp = kTempLag * temp +
               (1.0 - kTempLag) * (kTempBase + kTempGain * power) +
               rng.gaussian(0.0, temp_noise);

        core[0] = load;
        core[1] = freq;
        core[2] = power;
        core[3] = temp;

        // Dimensionless core signals so every channel of a filler mixture
        // contributes on a comparable footing.
        double core_n[kCoreChannels] = {
            load,
            (freq - kFreqMin) / freq_range,
            (power - kPowerBase - kPowerFreqCoeff * kFreqMin) / kPowerRange,
            (temp - kTempBase) / (kTempGain * kPowerRange),
        };

        double* row = trace.samples.row(t);
        for (std::size_t k = 0; k < kCoreChannels; ++k)
            row[k] = profile.gain_factors[k] * core[k] +
                     profile.baseline_offsets[k] * channel_scale(k);
        for (std::size_t i = kCoreChannels; i < dim; ++i) {
            double w[kCoreChannels];
            mixture_weights(i, w);
            double v = 0.0;
            for (std::size_t k = 0; k < kCoreChannels; ++k) v += w[k] * core_n[k];
            v += rng.gaussian(0.0, kChannelNoiseFrac);
            row[i] = profile.gain_factors[i] * v + profile.baseline_offsets[i];
        }
    }

    // Contiguous idle gaps until gap_fraction of the trace is masked off.
    std::size_t target_gaps =
        static_cast<std::size_t>(gap_fraction * static_cast<double>(length) + 0.5);
    std::size_t masked = 0;
    std::size_t run_len = std::max<std::size_t>(1, length / 40);
    while (masked < target_gaps) {
        std::size_t start = rng.index(length);
        for (std::size_t t = start; t < std::min(start + run_len, length) &&
                                    masked < target_gaps;
             ++t) {
            if (trace.valid_mask[t]) {
                trace.valid_mask[t] = false;
                ++masked;
            }
        }
    }

    return trace;
}

std::vector<LabeledTrace> fleet_generate(const std::vector<NodeProfile>& profiles,
                                         std::size_t length, std::size_t dim,
                                         const AnomalySchedule& schedule,
                                         double gap_fraction) {
    if (profiles.empty()) throw std::invalid_argument("no profiles");
    for (std::size_t i = 0; i < profiles.size(); ++i)
        for (std::size_t j = i + 1; j < profiles.size(); ++j)
            if (profiles[i].node_id == profiles[j].node_id)
                throw std::invalid_argument("duplicate node_id: " + profiles[i].node_id);

    std::vector<LabeledTrace> traces;
    traces.reserve(profiles.size());
    for (const auto& p : profiles)
        traces.push_back(generate_trace(p, length, dim, schedule, gap_fraction));
    return traces;
}

}  // namespace aedet
