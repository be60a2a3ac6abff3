#include "hpcsocial/sim_online.hpp"

#include "hpcsocial/error.hpp"

namespace hpcsocial {

SimMatrix StateSnapshot::to_matrix() const {
    SimMatrix m(users, thresholds);
    for (std::size_t i = 0; i < users.size(); ++i) {
        for (std::size_t j = 0; j < users.size(); ++j) m.at(i, j) = ratio(i, j);
    }
    return m;
}

OnlineState::OnlineState(Thresholds th) : thresholds_(th) { thresholds_.validate(); }

std::size_t OnlineState::register_user(std::string_view user) {
    auto [it, inserted] = index_.try_emplace(std::string(user), users_.size());
    if (!inserted) return it->second;

    users_.emplace_back(user);
    counts_.push_back(0);
    for (auto& row : connected_) row.push_back(0);
    connected_.emplace_back(users_.size(), 0);
    last_seen_.emplace_back();
    mark_.push_back(0);
    return it->second;
}

void OnlineState::observe(std::string_view user, Seconds t) {
    if (user.empty()) throw ContractError("observe: empty user id");
    if (t < 0) throw ContractError("observe: negative submit time " + std::to_string(t));
    if (last_time_ && t < *last_time_) {
        throw ContractError("observe: arrival at " + std::to_string(t) +
                            " precedes previous arrival at " + std::to_string(*last_time_));
    }

    const std::size_t i = register_user(user);
    ++counts_[i];
    ++jobs_seen_;
    last_time_ = t;

    // Keep jobs with |t - s| < c_job.
    while (!window_.empty() && window_.front().time <= t - thresholds_.c_job) window_.pop_front();
    window_.push_back({i, t});

    // The arriving job is connected to every user present in the window,
    // itself included.
    const std::uint64_t stamp = jobs_seen_;
    auto& row = connected_[i];
    for (const auto& e : window_) {
        if (mark_[e.user] != stamp) {
            mark_[e.user] = stamp;
            ++row[e.user];
        }
    }

    // Back-fill: windowed jobs of other users that had no job of this user
    // within reach until now. Anything earlier than last_seen + c_job was
    // already connected to the previous arrival of this user.
    const auto& prev = last_seen_[i];
    for (auto k = window_.size() - 1; k-- > 0;) {
        const auto& e = window_[k];
        if (prev && e.time < *prev + thresholds_.c_job) break;
        if (e.user != i) ++connected_[e.user][i];
    }
    last_seen_[i] = t;
}

StateSnapshot OnlineState::snapshot() const {
    return StateSnapshot{users_, counts_, connected_, jobs_seen_, thresholds_};
}

std::vector<std::vector<std::size_t>> OnlineState::followers(double c_user) const {
    if (!(c_user > 0.0 && c_user < 1.0)) throw ConfigError("c_user must lie strictly between 0 and 1");
    std::vector<std::vector<std::size_t>> out(users_.size());
    for (std::size_t j = 0; j < users_.size(); ++j) {
        for (std::size_t i = 0; i < users_.size(); ++i) {
            if (Fraction{connected_[i][j], counts_[i]}.exceeds(c_user)) out[j].push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> OnlineState::follower_counts(double c_user) const {
    std::vector<std::size_t> out;
    for (const auto& f : followers(c_user)) out.push_back(f.size());
    return out;
}

nlohmann::json OnlineState::to_json() const {
    nlohmann::json j;
    j["c_job"] = thresholds_.c_job;
    j["c_user"] = thresholds_.c_user;
    j["users"] = users_;
    j["C"] = counts_;
    j["R"] = connected_;
    j["jobs_seen"] = jobs_seen_;
    j["last_time"] = last_time_ ? nlohmann::json(*last_time_) : nlohmann::json(nullptr);
    auto& seen = j["last_seen"] = nlohmann::json::array();
    for (const auto& s : last_seen_) seen.push_back(s ? nlohmann::json(*s) : nlohmann::json(nullptr));
    auto& win = j["window"] = nlohmann::json::array();
    for (const auto& e : window_) win.push_back({e.user, e.time});
    return j;
}

OnlineState OnlineState::from_json(const nlohmann::json& j) {
    try {
        OnlineState s(Thresholds{j.at("c_job").get<Seconds>(), j.at("c_user").get<double>()});
        const auto users = j.at("users").get<std::vector<std::string>>();
        for (const auto& u : users) {
            if (s.index_.count(u) != 0) throw ConfigError("duplicate user '" + u + "' in state");
            s.register_user(u);
        }
        const std::size_t n = users.size();
        s.counts_ = j.at("C").get<std::vector<std::uint64_t>>();
        s.connected_ = j.at("R").get<std::vector<std::vector<std::uint64_t>>>();
        if (s.counts_.size() != n || s.connected_.size() != n) throw ConfigError("state size mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            if (s.connected_[i].size() != n) throw ConfigError("state size mismatch");
            for (auto r : s.connected_[i]) {
                if (r > s.counts_[i]) throw ConfigError("state violates R_ij <= C_i");
            }
        }
        s.jobs_seen_ = j.at("jobs_seen").get<std::uint64_t>();
        if (!j.at("last_time").is_null()) s.last_time_ = j.at("last_time").get<Seconds>();
        const auto& seen = j.at("last_seen");
        if (seen.size() != n) throw ConfigError("state size mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            if (!seen[i].is_null()) s.last_seen_[i] = seen[i].get<Seconds>();
        }
        for (const auto& e : j.at("window")) {
            const auto u = e.at(0).get<std::size_t>();
            if (u >= n) throw ConfigError("window references unknown user");
            s.window_.push_back({u, e.at(1).get<Seconds>()});
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed online state: ") + e.what());
    }
}

bool operator==(const OnlineState& a, const OnlineState& b) {
    return a.thresholds_ == b.thresholds_ && a.users_ == b.users_ && a.counts_ == b.counts_ &&
           a.connected_ == b.connected_ && a.window_ == b.window_ &&
           a.last_seen_ == b.last_seen_ && a.jobs_seen_ == b.jobs_seen_ &&
           a.last_time_ == b.last_time_;
}

OnlineState replay(const JobStream& stream, const Thresholds& th) {
    OnlineState s(th);
    for (const auto& r : stream.records()) s.observe(r);
    return s;
}

nlohmann::json snapshot_to_json(const StateSnapshot& s) {
    return nlohmann::json{{"users", s.users},
                          {"C", s.job_counts},
                          {"R", s.connected},
                          {"jobs_seen", s.jobs_seen}};
}

}  // namespace hpcsocial
