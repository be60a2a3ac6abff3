#include "hpcsocial/synth.hpp"

#include "hpcsocial/error.hpp"
#include "hpcsocial/rng.hpp"

#include <algorithm>
#include <cmath>

namespace hpcsocial {

namespace {

constexpr int kMaxPlacementAttempts = 10000;

// Arrival times of a Poisson process on [0, duration), at least one arrival.
std::vector<Seconds> poisson_times(Rng& rng, double per_hour, Seconds duration) {
    const double rate = per_hour / 3600.0;
    std::vector<Seconds> out;
    double t = rng.exponential(rate);
    while (t < static_cast<double>(duration)) {
        out.push_back(static_cast<Seconds>(t));
        t += rng.exponential(rate);
    }
    if (out.empty()) out.push_back(rng.between(0, duration - 1));
    return out;
}

std::string user_name(char prefix, std::size_t index) {
    return std::string(1, prefix) + std::to_string(index);
}

bool near_any(const std::vector<Seconds>& sorted, Seconds t, Seconds distance) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
    if (it != sorted.end() && *it - t < distance) return true;
    return it != sorted.begin() && t - *std::prev(it) < distance;
}

}  // namespace

std::size_t FollowerSampler::sample(Rng& rng) const {
    if (kind == Kind::Fixed) return fixed;
    std::vector<double> cumulative(cap);
    double total = 0.0;
    for (std::size_t k = 1; k <= cap; ++k) {
        total += std::pow(static_cast<double>(k), exponent);
        cumulative[k - 1] = total;
    }
    const double u = rng.uniform() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()) + 1, cap);
}

void SynthConfig::validate() const {
    if (!(echo_probability >= 0.0 && echo_probability <= 1.0)) {
        throw ConfigError("echo probability must lie in [0, 1]");
    }
    if (!(dominant_rate > 0.0) || !(follower_rate > 0.0) || !(noise_rate > 0.0)) {
        throw ConfigError("arrival rates must be positive");
    }
    if (duration <= 0) throw ConfigError("duration must be positive");
    if (echo_offset < 0) throw ConfigError("echo offset must be non-negative");
    if (non_echo_exclusion < 0) throw ConfigError("non-echo exclusion must be non-negative");
    if (followers.kind == FollowerSampler::Kind::PowerLaw) {
        if (!(followers.exponent < 0.0)) {
            throw ConfigError("power-law follower exponent must be negative");
        }
        if (followers.cap < 1) throw ConfigError("power-law follower cap must be at least 1");
    }
    if (n_dominant == 0 && noise_users == 0) throw ConfigError("configuration generates no jobs");
}

SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    std::vector<JobRecord> records;
    auto emit = [&](const std::string& user, Seconds t) {
        JobRecord r;
        r.user_id = user;
        r.submit_time = t;
        r.ordinal = records.size();
        records.push_back(std::move(r));
    };

    GroundTruth truth;
    truth.seed = cfg.seed;
    std::size_t follower_index = 0;
    for (std::size_t d = 0; d < cfg.n_dominant; ++d) {
        const std::string dominant = user_name('d', d);
        auto dom_times = poisson_times(rng, cfg.dominant_rate, cfg.duration);
        for (auto t : dom_times) emit(dominant, t);

        const std::size_t k = cfg.followers.sample(rng);
        truth.dominants.push_back(dominant);
        truth.planted_counts.push_back(k);

        for (std::size_t f = 0; f < k; ++f) {
            const std::string follower = user_name('f', follower_index++);
            truth.edges.push_back({follower, dominant, cfg.echo_probability});
            const std::size_t jobs = poisson_times(rng, cfg.follower_rate, cfg.duration).size();
            for (std::size_t q = 0; q < jobs; ++q) {
                if (rng.bernoulli(cfg.echo_probability)) {
                    const Seconds anchor = dom_times[rng.below(dom_times.size())];
                    emit(follower, std::max<Seconds>(0, anchor + rng.between(-cfg.echo_offset, cfg.echo_offset)));
                    continue;
                }
                Seconds t = rng.between(0, cfg.duration - 1);
                int attempts = 0;
                while (cfg.non_echo_exclusion > 0 && near_any(dom_times, t, cfg.non_echo_exclusion)) {
                    if (++attempts > kMaxPlacementAttempts) {
                        throw ConfigError("cannot place non-echo jobs: exclusion covers the trace");
                    }
                    t = rng.between(0, cfg.duration - 1);
                }
                emit(follower, t);
            }
        }
    }
    for (std::size_t n = 0; n < cfg.noise_users; ++n) {
        const std::string user = user_name('n', n);
        for (auto t : poisson_times(rng, cfg.noise_rate, cfg.duration)) emit(user, t);
    }

    SynthResult out;
    out.dataset.source.path = "synthetic";
    out.dataset.source.format = TraceFormat::Delimited;
    out.dataset.source.data_lines = records.size();
    out.dataset.source.parsed_records = records.size();
    out.dataset.streams.emplace(std::string{}, JobStream::from_records(std::move(records)));
    out.truth = std::move(truth);
    return out;
}

SynthResult plant_power_law(const SynthConfig& cfg) {
    if (cfg.followers.kind != FollowerSampler::Kind::PowerLaw) {
        throw ConfigError("plant_power_law needs a power-law follower sampler");
    }
    return generate(cfg);
}

nlohmann::json ground_truth_to_json(const GroundTruth& truth, const SynthConfig& cfg) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : truth.edges) {
        edges.push_back({{"follower", e.follower},
                         {"dominant", e.dominant},
                         {"echo_probability", e.echo_probability}});
    }
    nlohmann::json j;
    j["rng"] = Rng::kAlgorithm;
    j["seed"] = truth.seed;
    j["edges"] = std::move(edges);
    j["dominants"] = truth.dominants;
    j["planted_counts"] = truth.planted_counts;
    j["config"] = {
        {"n_dominant", cfg.n_dominant},
        {"follower_sampler", cfg.followers.kind == FollowerSampler::Kind::Fixed ? "fixed" : "power_law"},
        {"followers_fixed", cfg.followers.fixed},
        {"follower_exponent", cfg.followers.exponent},
        {"follower_cap", cfg.followers.cap},
        {"dominant_rate", cfg.dominant_rate},
        {"follower_rate", cfg.follower_rate},
        {"echo_probability", cfg.echo_probability},
        {"echo_offset", cfg.echo_offset},
        {"non_echo_exclusion", cfg.non_echo_exclusion},
        {"noise_users", cfg.noise_users},
        {"noise_rate", cfg.noise_rate},
        {"duration", cfg.duration},
    };
    return j;
}

}  // namespace hpcsocial
