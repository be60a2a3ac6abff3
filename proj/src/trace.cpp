#include "hpcsocial/trace.hpp"

#include "hpcsocial/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace hpcsocial {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
        out.push_back(line.substr(pos, end - pos));
        pos = end;
    }
    return out;
}

std::vector<std::string_view> split_on(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto end = line.find(delim, start);
        if (end == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

// Parses a non-negative time, truncating any fractional part toward zero.
std::optional<Seconds> parse_time(std::string_view token) {
    if (token.empty()) return std::nullopt;
    if (token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    if (!std::isfinite(value) || value < 0.0 || value > 9.0e15) return std::nullopt;
    return static_cast<Seconds>(std::trunc(value));
}

class DatasetBuilder {
public:
    DatasetBuilder(std::string path, TraceFormat format) {
        source_.path = std::move(path);
        source_.format = format;
    }

    void data_line() { ++source_.data_lines; }

    void reject(std::size_t line_no, std::string_view reason) {
        ++source_.parse_errors;
        if (source_.first_error.empty()) {
            source_.first_error = "line " + std::to_string(line_no) + ": " + std::string(reason);
        }
    }

    void accept(std::string_view user, Seconds time, std::optional<std::string> group) {
        JobRecord r;
        r.user_id = std::string(user);
        r.submit_time = time;
        r.group_id = std::move(group);
        r.ordinal = next_ordinal_++;
        const std::string key = r.group_id.value_or(std::string{});
        by_group_[key].push_back(std::move(r));
        ++source_.parsed_records;
    }

    TraceDataset finish() && {
        if (source_.data_lines > 0 && source_.parsed_records == 0) {
            throw TraceError("no parseable records in '" + source_.path +
                             "'; first bad line: " + source_.first_error);
        }
        TraceDataset ds;
        for (auto& [group, records] : by_group_) {
            ds.streams.emplace(group, JobStream::from_records(std::move(records)));
        }
        ds.source = std::move(source_);
        return ds;
    }

private:
    TraceSource source_;
    std::map<std::string, std::vector<JobRecord>> by_group_;
    std::uint64_t next_ordinal_ = 0;
};

}  // namespace

JobStream JobStream::from_records(std::vector<JobRecord> records) {
    for (const auto& r : records) {
        if (r.user_id.empty()) throw TraceError("job record with empty user id");
        if (r.submit_time < 0) {
            throw TraceError("negative submit time for user '" + r.user_id + "'");
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const JobRecord& a, const JobRecord& b) {
        if (a.submit_time != b.submit_time) return a.submit_time < b.submit_time;
        if (a.user_id != b.user_id) return a.user_id < b.user_id;
        return a.ordinal < b.ordinal;
    });

    JobStream s;
    std::unordered_map<std::string, std::size_t> index;
    s.user_index_.reserve(records.size());
    for (const auto& r : records) {
        auto [it, inserted] = index.try_emplace(r.user_id, s.users_.size());
        if (inserted) s.users_.push_back(r.user_id);
        s.user_index_.push_back(it->second);
    }
    s.records_ = std::move(records);
    return s;
}

std::vector<std::vector<Seconds>> JobStream::times_by_user() const {
    std::vector<std::vector<Seconds>> out(users_.size());
    for (std::size_t k = 0; k < records_.size(); ++k) {
        out[user_index_[k]].push_back(records_[k].submit_time);
    }
    return out;
}

std::vector<std::size_t> JobStream::job_counts() const {
    std::vector<std::size_t> out(users_.size(), 0);
    for (auto u : user_index_) ++out[u];
    return out;
}

std::size_t TraceDataset::total_records() const {
    std::size_t n = 0;
    for (const auto& [_, s] : streams) n += s.size();
    return n;
}

std::vector<std::string> TraceDataset::groups() const {
    std::vector<std::string> out;
    for (const auto& [g, _] : streams) out.push_back(g);
    return out;
}

ColumnMap canonical_columns() {
    return ColumnMap{0, 1, std::size_t{2}, ',', true};
}

TraceDataset parse_swf(std::istream& in, std::string source_name) {
    DatasetBuilder builder(std::move(source_name), TraceFormat::Swf);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == ';') continue;
        builder.data_line();

        const auto fields = split_whitespace(body);
        if (fields.size() < 18) {
            builder.reject(line_no, "expected 18 fields, found " + std::to_string(fields.size()));
            continue;
        }
        const auto time = parse_time(fields[1]);
        if (!time) {
            builder.reject(line_no, "bad submit time '" + std::string(fields[1]) + "'");
            continue;
        }
        if (fields[11] == "-1") {
            builder.reject(line_no, "unknown user (-1)");
            continue;
        }
        std::optional<std::string> group;
        if (fields[12] != "-1") group = std::string(fields[12]);
        builder.accept(fields[11], *time, std::move(group));
    }
    return std::move(builder).finish();
}

TraceDataset parse_delimited(std::istream& in, const ColumnMap& columns, std::string source_name) {
    DatasetBuilder builder(std::move(source_name), TraceFormat::Delimited);
    std::size_t needed = std::max(columns.user_col, columns.time_col);
    if (columns.group_col) needed = std::max(needed, *columns.group_col);

    std::string line;
    std::size_t line_no = 0;
    bool header_pending = columns.has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        builder.data_line();

        const auto fields = split_on(line, columns.delimiter);
        if (fields.size() <= needed) {
            builder.reject(line_no, "missing column (found " + std::to_string(fields.size()) + ")");
            continue;
        }
        const auto user = fields[columns.user_col];
        if (user.empty()) {
            builder.reject(line_no, "empty user id");
            continue;
        }
        const auto time = parse_time(fields[columns.time_col]);
        if (!time) {
            builder.reject(line_no, "bad submit time '" + std::string(fields[columns.time_col]) + "'");
            continue;
        }
        std::optional<std::string> group;
        if (columns.group_col && !fields[*columns.group_col].empty()) {
            group = std::string(fields[*columns.group_col]);
        }
        builder.accept(user, *time, std::move(group));
    }
    return std::move(builder).finish();
}

JobStream normalize(const TraceDataset& dataset, const NormalizeOptions& options) {
    std::vector<const JobStream*> selected;
    if (options.groups.empty()) {
        for (const auto& [_, s] : dataset.streams) selected.push_back(&s);
    } else {
        for (const auto& g : options.groups) {
            auto it = dataset.streams.find(g);
            if (it == dataset.streams.end()) {
                std::string available;
                for (const auto& name : dataset.groups()) {
                    if (!available.empty()) available += ", ";
                    available += name.empty() ? "(none)" : name;
                }
                throw TraceError("unknown group '" + g + "'; available groups: " + available);
            }
            selected.push_back(&it->second);
        }
    }

    std::vector<JobRecord> merged;
    for (const auto* s : selected) {
        merged.insert(merged.end(), s->records().begin(), s->records().end());
    }

    if (options.min_jobs_per_user > 0) {
        std::unordered_map<std::string, std::size_t> counts;
        for (const auto& r : merged) ++counts[r.user_id];
        std::erase_if(merged, [&](const JobRecord& r) {
            return counts[r.user_id] < options.min_jobs_per_user;
        });
    }
    return JobStream::from_records(std::move(merged));
}

void write_canonical(std::ostream& out, const JobStream& stream) {
    out << "user,time,group\n";
    for (const auto& r : stream.records()) {
        out << r.user_id << ',' << std::to_string(r.submit_time) << ','<< r.group_id.value_or(std::string{}) << '\n';
    }
}

TraceDataset load_trace(const std::string& path, TraceFormat format, const ColumnMap& columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceError("cannot open trace '" + path + "'");
    return format == TraceFormat::Swf ? parse_swf(in, path) : parse_delimited(in, columns, path);
}

}  // namespace hpcsocial
