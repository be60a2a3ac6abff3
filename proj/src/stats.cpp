#include "hpcsocial/stats.hpp"

#include "hpcsocial/error.hpp"
#include "hpcsocial/influence_graph.hpp"
#include "hpcsocial/sim_online.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hpcsocial {

EmpiricalCdf interarrival_cdf(const JobStream& stream) {
    if (stream.size() < 2) throw ContractError("interarrival CDF needs at least two jobs");
    std::map<Seconds, std::size_t> hist;
    const auto& recs = stream.records();
    for (std::size_t k = 1; k < recs.size(); ++k) {
        ++hist[recs[k].submit_time - recs[k - 1].submit_time];
    }
    const double total = static_cast<double>(recs.size() - 1);
    EmpiricalCdf cdf;
    std::size_t running = 0;
    for (const auto& [gap, n] : hist) {
        running += n;
        cdf.values.push_back(gap);
        cdf.fractions.push_back(static_cast<double>(running) / total);
    }
    cdf.fractions.back() = 1.0;
    return cdf;
}

double fraction_within(const EmpiricalCdf& cdf, Seconds d) {
    const auto it = std::upper_bound(cdf.values.begin(), cdf.values.end(), d);
    if (it == cdf.values.begin()) return 0.0;
    return cdf.fractions[static_cast<std::size_t>(it - cdf.values.begin()) - 1];
}

FollowerDistribution follower_distribution(std::span<const std::size_t> counts) {
    if (counts.empty()) throw ContractError("follower distribution of an empty count list");
    std::map<std::size_t, std::size_t> hist;
    for (auto c : counts) ++hist[c];
    FollowerDistribution d;
    for (const auto& [k, n] : hist) {
        d.k.push_back(k);
        d.frequency.push_back(n);
        d.p.push_back(static_cast<double>(n) / static_cast<double>(counts.size()));
    }
    return d;
}

PowerLawFit fit_power_law(std::span<const double> k, std::span<const double> p) {
    if (k.size() != p.size()) throw ContractError("power-law fit: k and P(k) lengths differ");
    if (k.size() < 2) throw ConfigError("insufficient support for a power-law fit");
    const double n = static_cast<double>(k.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!(k[i] > 0.0) || !(p[i] > 0.0)) {
            throw ContractError("power-law fit needs positive k and P(k)");
        }
        mx += std::log(k[i]);
        my += std::log(p[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double dx = std::log(k[i]) - mx;
        const double dy = std::log(p[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw ConfigError("insufficient support for a power-law fit");

    PowerLawFit fit;
    fit.b = sxy / sxx;
    fit.a = std::exp(my - fit.b * mx);
    fit.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    fit.support = k.size();
    return fit;
}

PowerLawFit fit_power_law(const FollowerDistribution& dist, FitTarget target) {
    std::vector<double> k, p;
    for (std::size_t i = 0; i < dist.k.size(); ++i) {
        if (dist.k[i] == 0 || dist.frequency[i] == 0) continue;  // log undefined
        k.push_back(static_cast<double>(dist.k[i]));
        p.push_back(target == FitTarget::Probability ? dist.p[i]
                                                     : static_cast<double>(dist.frequency[i]));
    }
    return fit_power_law(k, p);
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw ContractError("cosine similarity: length mismatch");
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) throw ContractError("cosine similarity of a zero vector");
    // sqrt of the product keeps identical integer-valued vectors at exactly 1.
    return std::clamp(dot / std::sqrt(uu * vv), -1.0, 1.0);
}

namespace {

struct Checkpoint {
    double fraction;
    std::uint64_t jobs;
};

std::vector<Checkpoint> checkpoint_grid(const CheckpointSpec& spec, std::uint64_t total) {
    std::vector<Checkpoint> grid;
    if (const auto* n = std::get_if<std::size_t>(&spec.grid)) {
        const std::uint64_t parts = *n + 1;
        for (std::uint64_t k = 1; k <= *n; ++k) {
            const std::uint64_t jobs = (k * total + parts - 1) / parts;
            grid.push_back({static_cast<double>(k) / static_cast<double>(parts), std::max<std::uint64_t>(jobs, 1)});
        }
    } else {
        auto fractions = std::get<std::vector<double>>(spec.grid);
        std::sort(fractions.begin(), fractions.end());
        fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
        for (const double f : fractions) {
            if (!(f > 0.0 && f <= 1.0)) {
                throw ConfigError("checkpoint fraction " + std::to_string(f) + " outside (0, 1]");
            }
            if (f == 1.0) continue;
            const double x = f * static_cast<double>(total);
            const double r = std::round(x);
            const double jobs = std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
            grid.push_back({f, std::max<std::uint64_t>(static_cast<std::uint64_t>(jobs), 1)});
        }
    }
    grid.push_back({1.0, total});
    return grid;
}

}  // namespace

ConvergenceSeries convergence_run(const JobStream& stream, const Thresholds& th,
                                  const CheckpointSpec& checkpoints, unsigned threads) {
    th.validate();
    if (stream.empty()) throw ContractError("convergence run on an empty stream");
    const auto grid = checkpoint_grid(checkpoints, stream.size());

    ConvergenceSeries series;
    series.baseline = follower_counts(extract_followers(compute_sim(stream, th, threads), th.c_user));
    const std::vector<double> baseline(series.baseline.begin(), series.baseline.end());

    OnlineState online(th);
    std::size_t next = 0;
    const auto& records = stream.records();
    for (std::size_t k = 0; k < records.size() && next < grid.size(); ++k) {
        online.observe(records[k]);
        while (next < grid.size() && grid[next].jobs == online.jobs_seen()) {
            const auto counts = online.follower_counts(th.c_user);
            std::vector<double> current(baseline.size(), 0.0);
            std::copy(counts.begin(), counts.end(), current.begin());
            series.points.push_back({grid[next].fraction, online.jobs_seen(),
                                     cosine_similarity(current, baseline), online.user_count()});
            ++next;
        }
    }
    return series;
}

}  // namespace hpcsocial
