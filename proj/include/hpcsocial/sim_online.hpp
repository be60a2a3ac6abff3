#pragma once

#include "hpcsocial/sim_offline.hpp"
#include "hpcsocial/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace hpcsocial {

/// Point-in-time copy of the streaming counters.
struct StateSnapshot {
    std::vector<std::string> users;
    std::vector<std::uint64_t> job_counts;                 // C_i
    std::vector<std::vector<std::uint64_t>> connected;     // R_ij
    std::uint64_t jobs_seen = 0;
    Thresholds thresholds;

    Fraction ratio(std::size_t i, std::size_t j) const {
        return Fraction{connected[i][j], job_counts[i]};
    }
    /// Same layout as compute_sim, so the two can be compared with ==.
    SimMatrix to_matrix() const;

    friend bool operator==(const StateSnapshot&, const StateSnapshot&) = default;
};

/// Incrementally maintained influence counters over a chronological job stream.
///
/// For every arrival the user's job count grows by one, the arriving job is
/// credited once for each distinct user with a job in the trailing window, and
/// jobs of those users that only now gain a connection to the arriving user are
/// credited back. After a full replay the counters equal compute_sim exactly.
///
/// Single writer: observe() must not run concurrently with anything else on the
/// same object. snapshot() copies and may be handed to other threads.
class OnlineState {
public:
    explicit OnlineState(Thresholds th);

    /// Throws ContractError (leaving the state untouched) if submit_time is
    /// earlier than the previous arrival or negative.
    void observe(std::string_view user, Seconds submit_time);
    void observe(const JobRecord& job) { observe(job.user_id, job.submit_time); }

    StateSnapshot snapshot() const;

    const Thresholds& thresholds() const { return thresholds_; }
    std::size_t user_count() const { return users_.size(); }
    std::uint64_t jobs_seen() const { return jobs_seen_; }
    std::optional<Seconds> last_time() const { return last_time_; }
    std::size_t window_size() const { return window_.size(); }
    const std::vector<std::string>& users() const { return users_; }

    /// followers[j] lists every i with R_ij / C_i > c_user, registry order.
    std::vector<std::vector<std::size_t>> followers(double c_user) const;
    std::vector<std::size_t> follower_counts(double c_user) const;

    /// Full resumable state (counters plus window and last-seen times).
    nlohmann::json to_json() const;
    static OnlineState from_json(const nlohmann::json& j);

    friend bool operator==(const OnlineState&, const OnlineState&);

private:
    struct WindowEntry {
        std::size_t user;
        Seconds time;
        friend bool operator==(const WindowEntry&, const WindowEntry&) = default;
    };

    std::size_t register_user(std::string_view user);

    Thresholds thresholds_;
    std::vector<std::string> users_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::uint64_t> counts_;
    std::vector<std::vector<std::uint64_t>> connected_;
    std::deque<WindowEntry> window_;
    std::vector<std::optional<Seconds>> last_seen_;
    std::uint64_t jobs_seen_ = 0;
    std::optional<Seconds> last_time_;
    // Scratch for distinct-user marking; not part of the logical state.
    std::vector<std::uint64_t> mark_;
};

/// Convenience: replay a whole stream.
OnlineState replay(const JobStream& stream, const Thresholds& th);

/// {users, C, R, jobs_seen}
nlohmann::json snapshot_to_json(const StateSnapshot& s);

}  // namespace hpcsocial
