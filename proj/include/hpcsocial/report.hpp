#pragma once

#include "hpcsocial/influence_graph.hpp"
#include "hpcsocial/sim_offline.hpp"
#include "hpcsocial/stats.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hpcsocial {

// Number formatting is locale-independent (std::to_chars).

/// Shortest round-trip form; integral values keep a trailing ".0".
std::string format_number(double v);
std::string format_fixed(double v, int decimals);

/// Header row `user,<id>,<id>...`, then one row per user; 6 decimals.
void write_matrix_csv(std::ostream& out, const SimMatrix& m);
/// {users:[...], m:[[...]]}
nlohmann::json matrix_to_json(const SimMatrix& m);

/// `follower,dominant,fraction`
void write_edges_csv(std::ostream& out, const FollowerGraph& g);
/// `user,followers`
void write_counts_csv(std::ostream& out, const std::vector<std::string>& users,
                      const std::vector<std::size_t>& counts);
/// `k,p`
void write_distribution_csv(std::ostream& out, const FollowerDistribution& d);
/// {a, b, r2, support}
nlohmann::json fit_to_json(const PowerLawFit& fit);
/// `gap_seconds,cum_fraction`
void write_cdf_csv(std::ostream& out, const EmpiricalCdf& cdf);
/// `fraction,jobs,cosine,users`
void write_series_csv(std::ostream& out, const ConvergenceSeries& s);

/// 64-bit FNV-1a of a byte string, 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Named in-memory output files of one run.
class OutputBundle {
public:
    void add(std::string name, std::string contents);
    void add_json(std::string name, const nlohmann::json& j);

    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }
    const std::string& at(const std::string& name) const;
    bool contains(const std::string& name) const;

    /// Writes every file into `dir`. Files are staged in a sibling temporary
    /// directory first, so a failure leaves no partial output behind.
    void commit(const std::filesystem::path& dir) const;

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace hpcsocial
