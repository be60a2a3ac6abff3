#include "hpcsocial/cli.hpp"

#include "hpcsocial/error.hpp"
#include "hpcsocial/influence_graph.hpp"
#include "hpcsocial/sim_online.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace hpcsocial {

namespace {

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TraceError("cannot open trace '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

template <class Writer, class... Args>
std::string render(Writer&& w, const Args&... args) {
    std::ostringstream os;
    w(os, args...);
    return os.str();
}

const char* format_name(TraceFormat f) { return f == TraceFormat::Swf ? "swf" : "csv"; }

struct LoadedTrace {
    TraceDataset dataset;
    JobStream stream;
};

LoadedTrace load_input(RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("--input is required");
    const std::string bytes = read_file(cfg.input);
    cfg.input_digest = fnv1a_hex(bytes);
    std::istringstream in(bytes);
    LoadedTrace t;
    t.dataset = cfg.format == TraceFormat::Swf ? parse_swf(in, cfg.input)
                                               : parse_delimited(in, cfg.columns, cfg.input);
    t.stream = normalize(t.dataset, cfg.filter);
    if (t.stream.empty()) throw TraceError("empty trace");
    return t;
}

Thresholds thresholds_for(const RunConfig& cfg, double c_user) {
    Thresholds th{cfg.c_job, c_user};
    th.validate();
    return th;
}

nlohmann::json fit_report(const std::vector<std::size_t>& counts, const RunConfig& cfg) {
    const auto dist = follower_distribution(counts);
    try {
        auto j = fit_to_json(fit_power_law(dist, cfg.fit_target));
        j["target"] = cfg.fit_target == FitTarget::Probability ? "probability" : "count";
        j["include_self"] = cfg.include_self;
        return j;
    } catch (const ConfigError& e) {
        return nlohmann::json{{"a", nullptr}, {"b", nullptr}, {"r2", nullptr},
                              {"support", dist.k.size()}, {"error", "insufficient support"}};
    }
}

}  // namespace

Seconds parse_duration(std::string_view text) {
    std::string_view num = text;
    double scale = 1.0;
    if (!num.empty()) {
        switch (num.back()) {
            case 's': num.remove_suffix(1); break;
            case 'm': scale = 60.0; num.remove_suffix(1); break;
            case 'h': scale = 3600.0; num.remove_suffix(1); break;
            default: break;
        }
    }
    const auto v = to_double(num);
    if (!v) throw ConfigError("invalid duration '" + std::string(text) + "'");
    const double seconds = std::round(*v * scale);
    if (!(seconds >= 1.0) || seconds > 1e15) {
        throw ConfigError("duration must be at least one second: '" + std::string(text) + "'");
    }
    return static_cast<Seconds>(seconds);
}

double parse_fraction(std::string_view text) {
    std::string_view num = text;
    double scale = 1.0;
    if (!num.empty() && num.back() == '%') {
        num.remove_suffix(1);
        scale = 0.01;
    }
    const auto v = to_double(num);
    if (!v) throw ConfigError("invalid fraction '" + std::string(text) + "'");
    const double f = *v * scale;
    if (!(f > 0.0 && f < 1.0)) {
        throw ConfigError("fraction must lie strictly between 0 and 1: '" + std::string(text) + "'");
    }
    return f;
}

CheckpointSpec parse_checkpoints(std::string_view text) {
    if (text.find_first_of(".,") == std::string_view::npos) {
        std::size_t n = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
            throw ConfigError("invalid checkpoint count '" + std::string(text) + "'");
        }
        return CheckpointSpec{n};
    }
    std::vector<double> fractions;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        const auto v = to_double(text.substr(start, end - start));
        if (!v || !(*v > 0.0 && *v <= 1.0)) {
            throw ConfigError("invalid checkpoint fraction in '" + std::string(text) + "'");
        }
        fractions.push_back(*v);
        start = end + 1;
    }
    return CheckpointSpec{fractions};
}

std::string c_user_tag(double c_user) {
    std::string pct = format_fixed(c_user * 100.0, 4);
    while (pct.back() == '0') pct.pop_back();
    if (pct.back() == '.') pct.pop_back();
    return "cu" + pct;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["seed"] = synth.seed;
    if (command == "synth") {
        j["synth"] = ground_truth_to_json(GroundTruth{}, synth)["config"];
        return j;
    }
    j["input"] = input;
    j["input_digest"] = input_digest;
    j["format"] = format_name(format);
    j["columns"] = {{"user_col", columns.user_col},
                    {"time_col", columns.time_col},
                    {"group_col", columns.group_col ? nlohmann::json(*columns.group_col) : nlohmann::json(nullptr)},
                    {"delimiter", std::string(1, columns.delimiter)},
                    {"has_header", columns.has_header}};
    j["groups"] = filter.groups;
    j["min_jobs"] = filter.min_jobs_per_user;
    j["c_job"] = c_job;
    j["c_user"] = c_users;
    if (const auto* n = std::get_if<std::size_t>(&checkpoints.grid)) {
        j["checkpoints"] = *n;
    } else {
        j["checkpoints"] = std::get<std::vector<double>>(checkpoints.grid);
    }
    j["include_self"] = include_self;
    j["fit_target"] = fit_target == FitTarget::Probability ? "probability" : "count";
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    try {
        RunConfig c;
        c.command = j.at("command").get<std::string>();
        c.synth.seed = j.at("seed").get<std::uint64_t>();
        if (c.command == "synth") {
            const auto& s = j.at("synth");
            c.synth.n_dominant = s.at("n_dominant").get<std::size_t>();
            c.synth.followers.kind = s.at("follower_sampler").get<std::string>() == "fixed"
                                         ? FollowerSampler::Kind::Fixed
                                         : FollowerSampler::Kind::PowerLaw;
            c.synth.followers.fixed = s.at("followers_fixed").get<std::size_t>();
            c.synth.followers.exponent = s.at("follower_exponent").get<double>();
            c.synth.followers.cap = s.at("follower_cap").get<std::size_t>();
            c.synth.dominant_rate = s.at("dominant_rate").get<double>();
            c.synth.follower_rate = s.at("follower_rate").get<double>();
            c.synth.echo_probability = s.at("echo_probability").get<double>();
            c.synth.echo_offset = s.at("echo_offset").get<Seconds>();
            c.synth.non_echo_exclusion = s.at("non_echo_exclusion").get<Seconds>();
            c.synth.noise_users = s.at("noise_users").get<std::size_t>();
            c.synth.noise_rate = s.at("noise_rate").get<double>();
            c.synth.duration = s.at("duration").get<Seconds>();
            return c;
        }
        c.input = j.at("input").get<std::string>();
        c.input_digest = j.at("input_digest").get<std::string>();
        c.format = j.at("format").get<std::string>() == "swf" ? TraceFormat::Swf : TraceFormat::Delimited;
        const auto& cols = j.at("columns");
        c.columns.user_col = cols.at("user_col").get<std::size_t>();
        c.columns.time_col = cols.at("time_col").get<std::size_t>();
        c.columns.group_col = cols.at("group_col").is_null()
                                  ? std::nullopt
                                  : std::optional<std::size_t>(cols.at("group_col").get<std::size_t>());
        const auto delim = cols.at("delimiter").get<std::string>();
        if (delim.size() != 1) throw ConfigError("delimiter must be a single character");
        c.columns.delimiter = delim[0];
        c.columns.has_header = cols.at("has_header").get<bool>();
        c.filter.groups = j.at("groups").get<std::vector<std::string>>();
        c.filter.min_jobs_per_user = j.at("min_jobs").get<std::size_t>();
        c.c_job = j.at("c_job").get<Seconds>();
        c.c_users = j.at("c_user").get<std::vector<double>>();
        if (j.at("checkpoints").is_array()) {
            c.checkpoints.grid = j.at("checkpoints").get<std::vector<double>>();
        } else {
            c.checkpoints.grid = j.at("checkpoints").get<std::size_t>();
        }
        c.include_self = j.at("include_self").get<bool>();
        c.fit_target = j.at("fit_target").get<std::string>() == "count" ? FitTarget::Count
                                                                        : FitTarget::Probability;
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed run configuration: ") + e.what());
    }
}

OutputBundle cmd_analyze(RunConfig cfg) {
    const auto trace = load_input(cfg);
    const auto& stream = trace.stream;
    const auto matrix = compute_sim(stream, thresholds_for(cfg, cfg.c_users.front()), cfg.threads);

    OutputBundle out;
    out.add("sim_matrix.csv", render(write_matrix_csv, matrix));
    out.add_json("sim_matrix.json", matrix_to_json(matrix));

    nlohmann::json per_threshold = nlohmann::json::array();
    for (const double c_user : cfg.c_users) {
        thresholds_for(cfg, c_user);
        const auto tag = c_user_tag(c_user);
        const auto graph = extract_followers(matrix, c_user);
        const auto counts = follower_counts(graph, true);
        const auto fit_counts = follower_counts(graph, cfg.include_self);
        const auto fit = fit_report(fit_counts, cfg);
        const auto dominants = dominant_users(graph);

        out.add("followers_" + tag + ".csv", render(write_edges_csv, graph));
        out.add("follower_counts_" + tag + ".csv", render(write_counts_csv, graph.users, counts));
        out.add("follower_distribution_" + tag + ".csv",
                render(write_distribution_csv, follower_distribution(fit_counts)));
        out.add_json("power_law_" + tag + ".json", fit);
        per_threshold.push_back({{"c_user", c_user},
                                 {"edges", graph.edges.size()},
                                 {"dominant_users", dominants.size()},
                                 {"pct_users_with_followers",
                                  100.0 * static_cast<double>(dominants.size()) /
                                      static_cast<double>(stream.user_count())},
                                 {"power_law", fit}});
    }

    nlohmann::json summary;
    summary["users"] = stream.user_count();
    summary["jobs"] = stream.size();
    summary["groups"] = trace.dataset.groups();
    summary["parse_errors"] = trace.dataset.source.parse_errors;
    summary["c_job"] = cfg.c_job;
    summary["thresholds"] = std::move(per_threshold);
    out.add_json("summary.json", summary);
    out.add_json("run.json", cfg.to_json());
    return out;
}

OutputBundle cmd_stream(RunConfig cfg) {
    const auto trace = load_input(cfg);
    const auto& stream = trace.stream;
    const auto state = replay(stream, thresholds_for(cfg, cfg.c_users.front()));
    const auto snap = state.snapshot();

    OutputBundle out;
    out.add("online_matrix.csv", render(write_matrix_csv, snap.to_matrix()));
    out.add_json("online_state.json", snapshot_to_json(snap));
    out.add_json("online_checkpoint.json", state.to_json());

    nlohmann::json finals = nlohmann::json::array();
    for (const double c_user : cfg.c_users) {
        const auto th = thresholds_for(cfg, c_user);
        const auto tag = c_user_tag(c_user);
        const auto series = convergence_run(stream, th, cfg.checkpoints, cfg.threads);
        out.add("convergence_" + tag + ".csv", render(write_series_csv, series));
        out.add("follower_counts_" + tag + ".csv",
                render(write_counts_csv, state.users(), state.follower_counts(c_user)));
        finals.push_back({{"c_user", c_user},
                          {"final_cosine", series.points.back().cosine},
                          {"checkpoints", series.points.size()}});
    }

    nlohmann::json summary;
    summary["users"] = state.user_count();
    summary["jobs"] = state.jobs_seen();
    summary["c_job"] = cfg.c_job;
    summary["window_size"] = state.window_size();
    summary["thresholds"] = std::move(finals);
    out.add_json("summary.json", summary);
    out.add_json("run.json", cfg.to_json());
    return out;
}

OutputBundle cmd_synth(RunConfig cfg) {
    const auto result = generate(cfg.synth);
    OutputBundle out;
    out.add("trace.csv", render(write_canonical, result.dataset.streams.begin()->second));
    out.add_json("ground_truth.json", ground_truth_to_json(result.truth, cfg.synth));
    out.add_json("run.json", cfg.to_json());
    return out;
}

OutputBundle cmd_cdf(RunConfig cfg) {
    const auto trace = load_input(cfg);
    const auto cdf = interarrival_cdf(trace.stream);

    OutputBundle out;
    out.add("interarrival_cdf.csv", render(write_cdf_csv, cdf));
    nlohmann::json report;
    report["jobs"] = trace.stream.size();
    report["gaps"] = trace.stream.size() - 1;
    report["distinct_gaps"] = cdf.values.size();
    report["within_1800s"] = fraction_within(cdf, 1800);
    if (cfg.c_job != 1800) {
        report["within_" + std::to_string(cfg.c_job) + "s"] = fraction_within(cdf, cfg.c_job);
    }
    out.add_json("cdf_report.json", report);
    out.add_json("run.json", cfg.to_json());
    return out;
}

OutputBundle run_command(const RunConfig& cfg) {
    if (cfg.command == "analyze") return cmd_analyze(cfg);
    if (cfg.command == "stream") return cmd_stream(cfg);
    if (cfg.command == "synth") return cmd_synth(cfg);
    if (cfg.command == "cdf") return cmd_cdf(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

namespace {

struct RawFlags {
    std::string format = "csv";
    std::optional<std::size_t> group_col;
    std::string delimiter = ",";
    bool no_header = false;
    std::string c_job = "30m";
    std::vector<std::string> c_user{"50%"};
    std::string checkpoints = "200";
    bool exclude_self = false;
    std::string fit_target = "probability";
    std::string follower_sampler = "fixed";
    std::string echo_offset = "600";
    std::string non_echo_exclusion = "0";
    std::string duration = "30d";
    std::string run_file;
};

void add_trace_options(CLI::App* sub, RunConfig& cfg, RawFlags& raw) {
    sub->add_option("--input,-i", cfg.input, "Trace file")->required();
    sub->add_option("--format", raw.format, "Trace format")->check(CLI::IsMember({"swf", "csv"}));
    sub->add_option("--user-col", cfg.columns.user_col, "0-based user column (csv)");
    sub->add_option("--time-col", cfg.columns.time_col, "0-based submit-time column (csv)");
    sub->add_option("--group-col", raw.group_col, "0-based group column (csv)");
    sub->add_option("--delimiter", raw.delimiter, "Field delimiter (csv)");
    sub->add_flag("--no-header", raw.no_header, "Input has no header row (csv)");
    sub->add_option("--group", cfg.filter.groups, "Restrict to group(s)");
    sub->add_option("--min-jobs", cfg.filter.min_jobs_per_user, "Drop users with fewer jobs");
    sub->add_option("--c-job", raw.c_job, "Job window: seconds or 30m / 0.5h / 6h");
    sub->add_option("--c-user", raw.c_user, "User threshold(s): 0.5 or 50%; repeat to sweep");
    sub->add_option("--threads", cfg.threads, "Worker threads for the offline matrix (0 = all)");
    sub->add_option("--seed", cfg.synth.seed, "Seed (recorded only)");
}

Seconds parse_span(const std::string& text) {
    if (!text.empty() && text.back() == 'd') {
        return parse_duration(text.substr(0, text.size() - 1) + "h") * 24;
    }
    return parse_duration(text);
}

// Like parse_duration but also accepts zero.
Seconds parse_offset(const std::string& text) {
    const auto v = to_double(text);
    if (v && *v == 0.0) return 0;
    return parse_duration(text);
}

void resolve(RunConfig& cfg, const RawFlags& raw) {
    cfg.format = raw.format == "swf" ? TraceFormat::Swf : TraceFormat::Delimited;
    if (raw.group_col) cfg.columns.group_col = raw.group_col;
    else if (cfg.format == TraceFormat::Delimited) cfg.columns.group_col = std::nullopt;
    if (raw.delimiter.size() != 1) throw ConfigError("--delimiter must be a single character");
    cfg.columns.delimiter = raw.delimiter == "\\t" ? '\t' : raw.delimiter[0];
    cfg.columns.has_header = !raw.no_header;
    cfg.c_job = parse_duration(raw.c_job);
    cfg.c_users.clear();
    for (const auto& c : raw.c_user) cfg.c_users.push_back(parse_fraction(c));
    if (cfg.c_users.empty()) throw ConfigError("at least one --c-user is required");
    cfg.checkpoints = parse_checkpoints(raw.checkpoints);
    cfg.include_self = !raw.exclude_self;
    cfg.fit_target = raw.fit_target == "count" ? FitTarget::Count : FitTarget::Probability;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    RawFlags raw;
    cfg.columns.group_col = std::nullopt;

    CLI::App app{"Social influence analysis of HPC job-submission traces", "hpcsocial"};
    app.require_subcommand(1);
    app.add_option("--out,-o", cfg.out, "Output directory");

    auto* analyze = app.add_subcommand("analyze", "Offline influence matrix, followers and power-law fit");
    auto* stream = app.add_subcommand("stream", "Online replay with convergence against the offline result");
    auto* cdf = app.add_subcommand("cdf", "Interarrival-time CDF");
    auto* synth = app.add_subcommand("synth", "Generate a synthetic trace with planted followers");
    auto* rerun = app.add_subcommand("rerun", "Reproduce a run from its run.json");

    for (auto* sub : {analyze, stream, cdf}) {
        add_trace_options(sub, cfg, raw);
        sub->add_option("--out,-o", cfg.out, "Output directory");
    }
    for (auto* sub : {analyze}) {
        sub->add_flag("--exclude-self", raw.exclude_self, "Do not count self-follow in the power-law fit");
        sub->add_option("--fit-target", raw.fit_target, "Fit P(k) or raw counts")
            ->check(CLI::IsMember({"probability", "count"}));
    }
    stream->add_option("--checkpoints", raw.checkpoints, "Checkpoint count or comma-separated fractions");

    synth->add_option("--out,-o", cfg.out, "Output directory");
    synth->add_option("--seed", cfg.synth.seed, "Generator seed");
    synth->add_option("--n-dominant", cfg.synth.n_dominant, "Dominant users");
    synth->add_option("--follower-sampler", raw.follower_sampler, "fixed or power-law")
        ->check(CLI::IsMember({"fixed", "power-law"}));
    synth->add_option("--followers", cfg.synth.followers.fixed, "Followers per dominant (fixed sampler)");
    synth->add_option("--follower-exponent", cfg.synth.followers.exponent, "Power-law exponent b < 0");
    synth->add_option("--follower-cap", cfg.synth.followers.cap, "Largest follower count");
    synth->add_option("--dominant-rate", cfg.synth.dominant_rate, "Dominant jobs per hour");
    synth->add_option("--follower-rate", cfg.synth.follower_rate, "Follower jobs per hour");
    synth->add_option("--echo-prob", cfg.synth.echo_probability, "Probability a follower job echoes its dominant");
    synth->add_option("--echo-offset", raw.echo_offset, "Maximum echo offset (duration)");
    synth->add_option("--non-echo-exclusion", raw.non_echo_exclusion,
                      "Keep non-echo jobs this far from the dominant's jobs (duration, 0 = off)");
    synth->add_option("--noise-users", cfg.synth.noise_users, "Unrelated users");
    synth->add_option("--noise-rate", cfg.synth.noise_rate, "Unrelated-user jobs per hour");
    synth->add_option("--duration", raw.duration, "Trace length (e.g. 30d, 720h)");

    rerun->add_option("run_json", raw.run_file, "run.json of an earlier run")->required();
    rerun->add_option("--out,-o", cfg.out, "Output directory");
    rerun->add_option("--threads", cfg.threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }

    try {
        if (*rerun) {
            std::ifstream in(raw.run_file);
            if (!in) throw ConfigError("cannot open '" + raw.run_file + "'");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("malformed run.json: " + std::string(e.what()));
            }
            auto replayed = RunConfig::from_json(j);
            replayed.out = cfg.out;
            replayed.threads = cfg.threads;
            auto bundle = run_command(replayed);
            if (replayed.command != "synth" &&
                nlohmann::json::parse(bundle.at("run.json")).at("input_digest") != replayed.input_digest) {
                throw TraceError("input '" + replayed.input + "' changed since the recorded run");
            }
            bundle.commit(replayed.out);
            return 0;
        }

        if (*synth) {
            cfg.command = "synth";
            cfg.synth.followers.kind = raw.follower_sampler == "fixed" ? FollowerSampler::Kind::Fixed
                                                                       : FollowerSampler::Kind::PowerLaw;
            cfg.synth.echo_offset = parse_offset(raw.echo_offset);
            cfg.synth.non_echo_exclusion = parse_offset(raw.non_echo_exclusion);
            cfg.synth.duration = parse_span(raw.duration);
            cfg.synth.validate();
        } else {
            cfg.command = *analyze ? "analyze" : *stream ? "stream" : "cdf";
            resolve(cfg, raw);
        }
        run_command(cfg).commit(cfg.out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("hpcsocial");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace hpcsocial
