#include "hpcsocial/sim_offline.hpp"

#include "hpcsocial/error.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hpcsocial {

void Thresholds::validate() const {
    if (c_job <= 0) throw ConfigError("c_job must be positive, got " + std::to_string(c_job));
    if (!(c_user > 0.0 && c_user < 1.0)) {
        throw ConfigError("c_user must lie strictly between 0 and 1, got " + std::to_string(c_user));
    }
}

bool Fraction::exceeds(double threshold) const {
    return static_cast<long double>(connected) >
           static_cast<long double>(threshold) * static_cast<long double>(total);
}

SimMatrix::SimMatrix(std::vector<std::string> users, Thresholds thresholds)
    : users_(std::move(users)), thresholds_(thresholds), cells_(users_.size() * users_.size()) {}

std::size_t SimMatrix::index_of(const std::string& user) const {
    auto it = std::find(users_.begin(), users_.end(), user);
    if (it == users_.end()) throw std::out_of_range("unknown user '" + user + "'");
    return static_cast<std::size_t>(it - users_.begin());
}

std::vector<Seconds> min_gaps(std::span<const Seconds> x, std::span<const Seconds> y) {
    if (y.empty()) throw ContractError("min_gaps: reference job list is empty");
    std::vector<Seconds> out;
    out.reserve(x.size());
    std::size_t q = 0;  // first y >= current x
    for (const Seconds t : x) {
        while (q < y.size() && y[q] < t) ++q;
        Seconds best = std::numeric_limits<Seconds>::max();
        if (q < y.size()) best = y[q] - t;
        if (q > 0) best = std::min(best, t - y[q - 1]);
        out.push_back(best);
    }
    return out;
}

std::uint64_t count_connected(std::span<const Seconds> x, std::span<const Seconds> y,
                              Seconds window) {
    if (y.empty()) throw ContractError("count_connected: reference job list is empty");
    std::uint64_t n = 0;
    std::size_t q = 0;
    for (const Seconds t : x) {
        while (q < y.size() && y[q] < t) ++q;
        const bool after = q < y.size() && y[q] - t < window;
        const bool before = q > 0 && t - y[q - 1] < window;
        if (after || before) ++n;
    }
    return n;
}

SimMatrix compute_sim(const JobStream& stream, const Thresholds& th, unsigned threads) {
    th.validate();
    if (stream.empty()) throw ContractError("compute_sim: empty job stream");

    const auto times = stream.times_by_user();
    const std::size_t n = times.size();
    SimMatrix m(stream.users(), th);

    auto fill_row = [&](std::size_t i) {
        const std::uint64_t total = times[i].size();
        for (std::size_t j = 0; j < n; ++j) {
            m.at(i, j) = Fraction{count_connected(times[i], times[j], th.c_job), total};
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fill_row(i);
        return m;
    }

    // Each row is written by exactly one worker.
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fill_row(i);
        });
    }
    pool.clear();
    return m;
}

SimMatrix compute_sim_naive(const JobStream& stream, const Thresholds& th) {
    th.validate();
    if (stream.empty()) throw ContractError("compute_sim_naive: empty job stream");

    const auto times = stream.times_by_user();
    SimMatrix m(stream.users(), th);
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = 0; j < times.size(); ++j) {
            std::uint64_t connected = 0;
            for (const Seconds x : times[i]) {
                Seconds d = std::numeric_limits<Seconds>::max();
                for (const Seconds y : times[j]) d = std::min(d, std::abs(x - y));
                if (d < th.c_job) ++connected;
            }
            m.at(i, j) = Fraction{connected, times[i].size()};
        }
    }
    return m;
}

}  // namespace hpcsocial
