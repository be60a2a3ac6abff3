#pragma once

#include "hpcsocial/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hpcsocial {

/// Job-level window and user-level fraction that define a social connection.
///
/// Two jobs are connected when their submit times differ by strictly less than
/// c_job. User i follows user j when strictly more than c_user of i's jobs are
/// connected to some job of j.
struct Thresholds {
    Seconds c_job = 1800;
    double c_user = 0.5;

    /// Throws ConfigError unless c_job > 0 and 0 < c_user < 1.
    void validate() const;

    friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

/// Exact ratio connected/total; kept as integers so two algorithms can be
/// compared without floating-point slack.
struct Fraction {
    std::uint64_t connected = 0;
    std::uint64_t total = 0;

    double value() const {
        return total == 0 ? 0.0 : static_cast<double>(connected) / static_cast<double>(total);
    }
    /// connected / total > threshold. Shared by every follower test.
    bool exceeds(double threshold) const;

    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Dense |U|x|U| matrix; entry (i, j) is the share of user i's jobs that have a
/// job of user j within the window.
class SimMatrix {
public:
    SimMatrix() = default;
    SimMatrix(std::vector<std::string> users, Thresholds thresholds);

    std::size_t size() const { return users_.size(); }
    const std::vector<std::string>& users() const { return users_; }
    const Thresholds& thresholds() const { return thresholds_; }

    Fraction& at(std::size_t i, std::size_t j) { return cells_[i * users_.size() + j]; }
    const Fraction& at(std::size_t i, std::size_t j) const { return cells_[i * users_.size() + j]; }
    double value(std::size_t i, std::size_t j) const { return at(i, j).value(); }

    /// Registry index of a user id; throws std::out_of_range if absent.
    std::size_t index_of(const std::string& user) const;

    friend bool operator==(const SimMatrix& a, const SimMatrix& b) {
        return a.users_ == b.users_ && a.cells_ == b.cells_;
    }

private:
    std::vector<std::string> users_;
    Thresholds thresholds_;
    std::vector<Fraction> cells_;
};

/// For each x in `x`, the smallest |x - y| over y in `y`. Both inputs sorted
/// ascending; `y` must be non-empty (ContractError otherwise). Linear merge.
std::vector<Seconds> min_gaps(std::span<const Seconds> x, std::span<const Seconds> y);

/// Number of entries of `x` with a `y` strictly within `window`; the counting
/// core of compute_sim without materializing the gaps.
std::uint64_t count_connected(std::span<const Seconds> x, std::span<const Seconds> y,
                              Seconds window);

/// Social influence matrix of a stream. Rows are independent and are split
/// across `threads` workers (0 = hardware concurrency); the result does not
/// depend on the thread count.
SimMatrix compute_sim(const JobStream& stream, const Thresholds& th, unsigned threads = 1);

/// Literal pairwise definition, O(|X|*|Y|) per cell. Test oracle.
SimMatrix compute_sim_naive(const JobStream& stream, const Thresholds& th);

}  // namespace hpcsocial
