#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hpcsocial {

/// Whole seconds, either epoch-based or relative to the start of a trace.
using Seconds = std::int64_t;

/// One job submission. Only the fields the analysis uses are kept.
struct JobRecord {
    std::string user_id;
    Seconds submit_time = 0;
    std::optional<std::string> group_id;
    /// Position in the source, used only to break ties deterministically.
    /// Not part of the record's identity.
    std::uint64_t ordinal = 0;

    friend bool operator==(const JobRecord& a, const JobRecord& b) {
        return a.user_id == b.user_id && a.submit_time == b.submit_time &&
               a.group_id == b.group_id;
    }
};

/// Chronologically ordered jobs plus a dense user registry.
///
/// Records are sorted by (submit_time, user_id, ordinal). The registry lists
/// users in order of first appearance in the sorted records, so index 0 is the
/// earliest submitter.
class JobStream {
public:
    JobStream() = default;

    /// Validates and canonicalizes arbitrary records.
    /// Throws TraceError on an empty user id or a negative submit time.
    static JobStream from_records(std::vector<JobRecord> records);

    const std::vector<JobRecord>& records() const { return records_; }
    const std::vector<std::string>& users() const { return users_; }
    /// Registry index of each record's user, parallel to records().
    const std::vector<std::size_t>& user_index() const { return user_index_; }

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::size_t user_count() const { return users_.size(); }

    /// Sorted submit times per user, in registry order.
    std::vector<std::vector<Seconds>> times_by_user() const;

    /// Per-user job counts, registry order.
    std::vector<std::size_t> job_counts() const;

    friend bool operator==(const JobStream& a, const JobStream& b) {
        return a.records_ == b.records_ && a.users_ == b.users_;
    }

private:
    std::vector<JobRecord> records_;
    std::vector<std::string> users_;
    std::vector<std::size_t> user_index_;
};

enum class TraceFormat { Swf, Delimited };

struct TraceSource {
    std::string path;
    TraceFormat format = TraceFormat::Delimited;
    std::size_t data_lines = 0;
    std::size_t parsed_records = 0;
    std::size_t parse_errors = 0;
    /// First skipped line as "line N: reason"; empty when nothing was skipped.
    std::string first_error;
};

/// Parsed trace split by group. Records without a group live under "".
struct TraceDataset {
    std::map<std::string, JobStream> streams;
    TraceSource source;

    std::size_t total_records() const;
    std::vector<std::string> groups() const;
};

struct ColumnMap {
    std::size_t user_col = 0;
    std::size_t time_col = 1;
    std::optional<std::size_t> group_col;
    char delimiter = ',';
    bool has_header = true;
};

/// Column map of the canonical `user,time,group` format.
ColumnMap canonical_columns();

/// Standard Workload Format: field 2 is the submit time, 12 the user, 13 the
/// group (1-indexed). Users of "-1" and malformed lines are skipped and
/// counted; input where no data line parses throws TraceError.
TraceDataset parse_swf(std::istream& in, std::string source_name = {});

TraceDataset parse_delimited(std::istream& in, const ColumnMap& columns,
                             std::string source_name = {});

struct NormalizeOptions {
    /// Groups to merge; empty selects every group.
    std::vector<std::string> groups;
    /// Drop users with fewer jobs than this. 0 disables the filter.
    std::size_t min_jobs_per_user = 0;
};

JobStream normalize(const TraceDataset& dataset, const NormalizeOptions& options = {});

/// Writes `user,time,group` with LF line endings.
void write_canonical(std::ostream& out, const JobStream& stream);

/// Opens and parses a file; throws TraceError if it cannot be read.
TraceDataset load_trace(const std::string& path, TraceFormat format,
                        const ColumnMap& columns = canonical_columns());

}  // namespace hpcsocial
