#pragma once

#include "hpcsocial/sim_offline.hpp"
#include "hpcsocial/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace hpcsocial {

/// Step CDF over distinct values.
struct EmpiricalCdf {
    std::vector<Seconds> values;     // strictly increasing
    std::vector<double> fractions;   // strictly increasing, last == 1
};

/// CDF of the gaps between consecutive submissions of the sorted stream.
/// Throws ContractError with fewer than two jobs.
EmpiricalCdf interarrival_cdf(const JobStream& stream);

/// Cumulative fraction at the largest support value <= d (0 below the support).
double fraction_within(const EmpiricalCdf& cdf, Seconds d);

struct FollowerDistribution {
    std::vector<std::size_t> k;          // ascending, only observed values
    std::vector<std::size_t> frequency;  // users with exactly k followers
    std::vector<double> p;               // frequency / users
};

FollowerDistribution follower_distribution(std::span<const std::size_t> counts);

enum class FitTarget { Probability, Count };

struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double r2 = 0.0;
    std::size_t support = 0;
};

/// Least squares of ln P(k) on ln k: P(k) = a * k^b. Needs two or more
/// distinct k values (ConfigError "insufficient support" otherwise).
PowerLawFit fit_power_law(const FollowerDistribution& dist, FitTarget target = FitTarget::Probability);

/// Least squares on explicit points; the primitive behind fit_power_law.
PowerLawFit fit_power_law(std::span<const double> k, std::span<const double> p);

/// u.v / (|u| |v|). Throws ContractError on length mismatch or a zero vector.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

struct ConvergencePoint {
    double fraction = 0.0;
    std::uint64_t jobs = 0;
    double cosine = 0.0;
    std::size_t users = 0;
};

struct ConvergenceSeries {
    std::vector<ConvergencePoint> points;
    /// Offline follower counts over the full stream (registry order).
    std::vector<std::size_t> baseline;
};

/// Either n evenly spaced interior checkpoints (k / (n + 1), k = 1..n) or an
/// explicit list of fractions in (0, 1]. 100% is always appended.
struct CheckpointSpec {
    std::variant<std::size_t, std::vector<double>> grid = std::size_t{200};
};

/// Replays the stream through OnlineState and compares online follower counts
/// with the offline baseline at each checkpoint. Users not yet seen count 0.
ConvergenceSeries convergence_run(const JobStream& stream, const Thresholds& th,
                                  const CheckpointSpec& checkpoints = {}, unsigned threads = 1);

}  // namespace hpcsocial
