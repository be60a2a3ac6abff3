#pragma once

// Trace builders shared by the unit and acceptance suites.

#include "hpcsocial/rng.hpp"
#include "hpcsocial/trace.hpp"

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

namespace hpcsocial::fixtures {

inline JobStream make_stream(std::initializer_list<std::pair<std::string, Seconds>> jobs) {
    std::vector<JobRecord> records;
    for (const auto& [user, t] : jobs) {
        JobRecord r;
        r.user_id = user;
        r.submit_time = t;
        r.ordinal = records.size();
        records.push_back(std::move(r));
    }
    return JobStream::from_records(std::move(records));
}

struct TraceShape {
    std::size_t max_users = 20;
    std::size_t max_jobs = 500;
    Seconds c_job = 1800;
};

/// Random trace mixing exact ties, gaps of exactly c_job, dense bursts and
/// long idle stretches, so window boundaries are hit on purpose.
inline JobStream random_trace(std::uint64_t seed, const TraceShape& shape) {
    Rng rng(seed);
    const std::size_t users = 1 + rng.below(shape.max_users);
    const std::size_t jobs = 1 + rng.below(shape.max_jobs);
    const Seconds c = shape.c_job;

    std::vector<JobRecord> records;
    Seconds t = static_cast<Seconds>(rng.below(static_cast<std::uint64_t>(3 * c)));
    for (std::size_t k = 0; k < jobs; ++k) {
        switch (rng.below(6)) {
            case 0: break;                                    // tie with previous job
            case 1: t += c; break;                            // exactly on the boundary
            case 2: t += c - 1; break;                        // just inside
            case 3: t += rng.between(0, 60); break;           // burst
            case 4: t += rng.between(0, 2 * c); break;        // ordinary spacing
            default: t += rng.between(c, 6 * c); break;       // idle stretch
        }
        JobRecord r;
        // Skewed user choice so some users are heavy and some rare.
        const auto a = rng.below(users);
        const auto b = rng.below(users);
        r.user_id = "u" + std::to_string(std::min(a, b));
        r.submit_time = t;
        r.ordinal = k;
        records.push_back(std::move(r));
    }
    // Shuffle file order so sorting and tie-breaking are exercised too.
    for (std::size_t k = records.size(); k > 1; --k) {
        std::swap(records[k - 1], records[rng.below(k)]);
    }
    for (std::size_t k = 0; k < records.size(); ++k) records[k].ordinal = k;
    return JobStream::from_records(std::move(records));
}

/// First n records of a stream, re-canonicalized.
inline JobStream prefix(const JobStream& s, std::size_t n) {
    std::vector<JobRecord> records(s.records().begin(), s.records().begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t k = 0; k < records.size(); ++k) records[k].ordinal = k;
    return JobStream::from_records(std::move(records));
}

/// Same jobs with every submit time shifted by `delta`.
inline JobStream shifted(const JobStream& s, Seconds delta) {
    std::vector<JobRecord> records = s.records();
    for (std::size_t k = 0; k < records.size(); ++k) {
        records[k].submit_time += delta;
        records[k].ordinal = k;
    }
    return JobStream::from_records(std::move(records));
}

}  // namespace hpcsocial::fixtures
