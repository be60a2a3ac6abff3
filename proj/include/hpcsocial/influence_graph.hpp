#pragma once

#include "hpcsocial/sim_offline.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hpcsocial {

struct FollowerEdge {
    std::size_t follower;
    std::size_t dominant;
    Fraction share;

    friend bool operator==(const FollowerEdge&, const FollowerEdge&) = default;
};

/// Directed follower -> dominant edges. Self-edges are present for every user
/// (the diagonal is 1), so every follower count is at least 1.
struct FollowerGraph {
    std::vector<std::string> users;
    std::vector<FollowerEdge> edges;  // sorted by (dominant, follower)
    Thresholds thresholds;

    bool has_edge(std::size_t follower, std::size_t dominant) const;
};

/// Edge i -> j iff M(i, j) > c_user. Throws ConfigError if c_user is not in (0, 1).
FollowerGraph extract_followers(const SimMatrix& m, double c_user);

/// Followers per user in registry order. With include_self = false the
/// self-edge is not counted.
std::vector<std::size_t> follower_counts(const FollowerGraph& g, bool include_self = true);

/// Users followed by at least one other user, registry order.
std::vector<std::string> dominant_users(const FollowerGraph& g);

/// Share of users with at least one follower other than themselves.
double dominant_share(const FollowerGraph& g);

}  // namespace hpcsocial
