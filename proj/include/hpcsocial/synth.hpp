#pragma once

#include "hpcsocial/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hpcsocial {

class Rng;

/// How many followers each dominant user gets.
struct FollowerSampler {
    enum class Kind { Fixed, PowerLaw };
    Kind kind = Kind::Fixed;
    std::size_t fixed = 2;
    /// P(k) proportional to k^exponent on [1, cap]; exponent must be negative.
    double exponent = -2.0;
    std::size_t cap = 10;

    std::size_t sample(Rng& rng) const;
};

struct SynthConfig {
    std::size_t n_dominant = 5;
    FollowerSampler followers;
    double dominant_rate = 2.0;  // jobs per hour, Poisson
    double follower_rate = 2.0;  // jobs per hour, sets each follower's job count
    double echo_probability = 0.75;
    Seconds echo_offset = 600;   // echo lands within +-echo_offset of a dominant job
    /// Non-echo follower jobs are redrawn until at least this far from every
    /// job of their dominant user. 0 disables the constraint.
    Seconds non_echo_exclusion = 0;
    std::size_t noise_users = 0;
    double noise_rate = 1.0;     // jobs per hour for unrelated users
    Seconds duration = 30 * 86400;
    std::uint64_t seed = 1;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

struct PlantedEdge {
    std::string follower;
    std::string dominant;
    double echo_probability = 0.0;

    friend bool operator==(const PlantedEdge&, const PlantedEdge&) = default;
};

struct GroundTruth {
    std::vector<PlantedEdge> edges;
    std::vector<std::string> dominants;
    /// Planted follower count per dominant, same order as `dominants`.
    std::vector<std::size_t> planted_counts;
    std::uint64_t seed = 0;
};

struct SynthResult {
    TraceDataset dataset;
    GroundTruth truth;
};

/// Deterministic for a fixed config. Every generated user submits at least one
/// job; dominant and noise users follow Poisson streams, and each follower job
/// echoes a random job of its dominant user with probability echo_probability.
SynthResult generate(const SynthConfig& cfg);

/// generate() with a power-law follower sampler; rejects any other sampler.
SynthResult plant_power_law(const SynthConfig& cfg);

nlohmann::json ground_truth_to_json(const GroundTruth& truth, const SynthConfig& cfg);

}  // namespace hpcsocial
