#include "hpcsocial/influence_graph.hpp"

#include "hpcsocial/error.hpp"

#include <algorithm>
#include <tuple>

namespace hpcsocial {

bool FollowerGraph::has_edge(std::size_t follower, std::size_t dominant) const {
    return std::binary_search(edges.begin(), edges.end(), FollowerEdge{follower, dominant, {}},
                              [](const FollowerEdge& a, const FollowerEdge& b) {
                                  return std::tie(a.dominant, a.follower) <
                                         std::tie(b.dominant, b.follower);
                              });
}

FollowerGraph extract_followers(const SimMatrix& m, double c_user) {
    if (!(c_user > 0.0 && c_user < 1.0)) {
        throw ConfigError("c_user must lie strictly between 0 and 1, got " + std::to_string(c_user));
    }
    FollowerGraph g;
    g.users = m.users();
    g.thresholds = Thresholds{m.thresholds().c_job, c_user};
    for (std::size_t j = 0; j < m.size(); ++j) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m.at(i, j).exceeds(c_user)) g.edges.push_back({i, j, m.at(i, j)});
        }
    }
    return g;
}

std::vector<std::size_t> follower_counts(const FollowerGraph& g, bool include_self) {
    std::vector<std::size_t> counts(g.users.size(), 0);
    for (const auto& e : g.edges) {
        if (include_self || e.follower != e.dominant) ++counts[e.dominant];
    }
    return counts;
}

std::vector<std::string> dominant_users(const FollowerGraph& g) {
    std::vector<std::string> out;
    const auto counts = follower_counts(g, false);
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] >= 1) out.push_back(g.users[j]);
    }
    return out;
}

double dominant_share(const FollowerGraph& g) {
    if (g.users.empty()) return 0.0;
    return static_cast<double>(dominant_users(g).size()) / static_cast<double>(g.users.size());
}

}  // namespace hpcsocial
