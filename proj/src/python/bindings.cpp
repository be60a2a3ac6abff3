#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "hpcsocial/cli.hpp"
#include "hpcsocial/error.hpp"
#include "hpcsocial/influence_graph.hpp"
#include "hpcsocial/sim_offline.hpp"
#include "hpcsocial/sim_online.hpp"
#include "hpcsocial/stats.hpp"
#include "hpcsocial/synth.hpp"
#include "hpcsocial/trace.hpp"

#include <sstream>

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace hpcsocial;

namespace {

using RecordTuple = std::tuple<std::string, Seconds, std::optional<std::string>>;

JobStream stream_from_tuples(const std::vector<RecordTuple>& rows) {
    std::vector<JobRecord> records;
    records.reserve(rows.size());
    for (const auto& [user, time, group] : rows) {
        records.push_back(JobRecord{user, time, group, records.size()});
    }
    return JobStream::from_records(std::move(records));
}

std::vector<RecordTuple> stream_to_tuples(const JobStream& s) {
    std::vector<RecordTuple> out;
    out.reserve(s.size());
    for (const auto& r : s.records()) out.emplace_back(r.user_id, r.submit_time, r.group_id);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = R"pbdoc(
        Social influence analysis of HPC job-submission traces.

        Offline influence matrix, streaming counterpart, follower graphs,
        power-law fits and a synthetic trace generator.
    )pbdoc";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<TraceError>(m, "TraceError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());

    py::class_<JobStream>(m, "JobStream")
        .def(py::init(&stream_from_tuples), py::arg("records"),
             "Build from (user, time, group-or-None) tuples; sorts and builds the registry.")
        .def_property_readonly("users", &JobStream::users)
        .def_property_readonly("records", &stream_to_tuples)
        .def("times_by_user", &JobStream::times_by_user)
        .def("job_counts", &JobStream::job_counts)
        .def("to_csv", [](const JobStream& s) {
            std::ostringstream os;
            write_canonical(os, s);
            return os.str();
        })
        .def("__len__", &JobStream::size)
        .def(py::self == py::self);

    py::class_<TraceDataset>(m, "TraceDataset")
        .def_property_readonly("groups", &TraceDataset::groups)
        .def_property_readonly("total_records", &TraceDataset::total_records)
        .def_property_readonly("parse_errors", [](const TraceDataset& d) { return d.source.parse_errors; })
        .def("stream", [](const TraceDataset& d, const std::string& g) { return d.streams.at(g); });

    m.def("parse_swf", [](const std::string& text) {
        std::istringstream in(text);
        return parse_swf(in, "<string>");
    }, py::arg("text"));
    m.def("parse_delimited",
          [](const std::string& text, std::size_t user_col, std::size_t time_col,
             std::optional<std::size_t> group_col, char delimiter, bool has_header) {
              std::istringstream in(text);
              return parse_delimited(in, ColumnMap{user_col, time_col, group_col, delimiter, has_header},
                                     "<string>");
          },
          py::arg("text"), py::arg("user_col") = 0, py::arg("time_col") = 1,
          py::arg("group_col") = std::nullopt, py::arg("delimiter") = ',', py::arg("has_header") = true);
    m.def("normalize",
          [](const TraceDataset& d, std::vector<std::string> groups, std::size_t min_jobs) {
              return normalize(d, NormalizeOptions{std::move(groups), min_jobs});
          },
          py::arg("dataset"), py::arg("groups") = std::vector<std::string>{}, py::arg("min_jobs_per_user") = 0);

    py::class_<Thresholds>(m, "Thresholds")
        .def(py::init([](Seconds c_job, double c_user) {
                 Thresholds th{c_job, c_user};
                 th.validate();
                 return th;
             }),
             py::arg("c_job") = 1800, py::arg("c_user") = 0.5)
        .def_readonly("c_job", &Thresholds::c_job)
        .def_readonly("c_user", &Thresholds::c_user);

    py::class_<SimMatrix>(m, "SimMatrix")
        .def_property_readonly("users", &SimMatrix::users)
        .def("__len__", &SimMatrix::size)
        .def("value", &SimMatrix::value, py::arg("i"), py::arg("j"))
        .def("pair", [](const SimMatrix& s, std::size_t i, std::size_t j) {
            const auto& f = s.at(i, j);
            return std::make_pair(f.connected, f.total);
        }, py::arg("i"), py::arg("j"), "Exact (connected, total) counts of a cell.")
        .def("index_of", &SimMatrix::index_of)
        .def("to_list", [](const SimMatrix& s) {
            std::vector<std::vector<double>> rows(s.size(), std::vector<double>(s.size()));
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = 0; j < s.size(); ++j) rows[i][j] = s.value(i, j);
            return rows;
        })
        .def(py::self == py::self);

    m.def("min_gaps", [](const std::vector<Seconds>& x, const std::vector<Seconds>& y) {
        return min_gaps(x, y);
    });
    m.def("compute_sim", &compute_sim, py::arg("stream"), py::arg("thresholds"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("compute_sim_naive", &compute_sim_naive, py::arg("stream"), py::arg("thresholds"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<StateSnapshot>(m, "StateSnapshot")
        .def_readonly("users", &StateSnapshot::users)
        .def_readonly("job_counts", &StateSnapshot::job_counts)
        .def_readonly("connected", &StateSnapshot::connected)
        .def_readonly("jobs_seen", &StateSnapshot::jobs_seen)
        .def("to_matrix", &StateSnapshot::to_matrix)
        .def("to_json", [](const StateSnapshot& s) { return snapshot_to_json(s).dump(); });

    py::class_<OnlineState>(m, "OnlineState")
        .def(py::init<Thresholds>(), py::arg("thresholds"))
        .def("observe", py::overload_cast<std::string_view, Seconds>(&OnlineState::observe),
             py::arg("user"), py::arg("submit_time"))
        .def("snapshot", &OnlineState::snapshot)
        .def("followers", &OnlineState::followers, py::arg("c_user"))
        .def("follower_counts", &OnlineState::follower_counts, py::arg("c_user"))
        .def_property_readonly("users", &OnlineState::users)
        .def_property_readonly("jobs_seen", &OnlineState::jobs_seen)
        .def_property_readonly("window_size", &OnlineState::window_size)
        .def("to_json", [](const OnlineState& s) { return s.to_json().dump(); })
        .def_static("from_json", [](const std::string& text) {
            return OnlineState::from_json(nlohmann::json::parse(text));
        });
    m.def("replay", &replay, py::arg("stream"), py::arg("thresholds"));

    py::class_<FollowerGraph>(m, "FollowerGraph")
        .def_readonly("users", &FollowerGraph::users)
        .def_property_readonly("edges", [](const FollowerGraph& g) {
            std::vector<std::tuple<std::string, std::string, double>> out;
            for (const auto& e : g.edges) out.emplace_back(g.users[e.follower], g.users[e.dominant], e.share.value());
            return out;
        })
        .def("has_edge", &FollowerGraph::has_edge);
    m.def("extract_followers", &extract_followers, py::arg("matrix"), py::arg("c_user"));
    m.def("follower_counts", &follower_counts, py::arg("graph"), py::arg("include_self") = true);
    m.def("dominant_users", &dominant_users, py::arg("graph"));

    py::class_<EmpiricalCdf>(m, "EmpiricalCdf")
        .def_readonly("values", &EmpiricalCdf::values)
        .def_readonly("fractions", &EmpiricalCdf::fractions);
    m.def("interarrival_cdf", &interarrival_cdf, py::arg("stream"));
    m.def("fraction_within", &fraction_within, py::arg("cdf"), py::arg("d"));

    py::class_<FollowerDistribution>(m, "FollowerDistribution")
        .def_readonly("k", &FollowerDistribution::k)
        .def_readonly("frequency", &FollowerDistribution::frequency)
        .def_readonly("p", &FollowerDistribution::p);
    m.def("follower_distribution",
          [](const std::vector<std::size_t>& counts) { return follower_distribution(counts); });

    py::class_<PowerLawFit>(m, "PowerLawFit")
        .def_readonly("a", &PowerLawFit::a)
        .def_readonly("b", &PowerLawFit::b)
        .def_readonly("r2", &PowerLawFit::r2)
        .def_readonly("support", &PowerLawFit::support);
    m.def("fit_power_law",
          [](const FollowerDistribution& d) { return fit_power_law(d); }, py::arg("distribution"));
    m.def("fit_power_law_points",
          [](const std::vector<double>& k, const std::vector<double>& p) { return fit_power_law(k, p); },
          py::arg("k"), py::arg("p"));
    m.def("cosine_similarity", [](const std::vector<double>& u, const std::vector<double>& v) {
        return cosine_similarity(u, v);
    });

    py::class_<ConvergencePoint>(m, "ConvergencePoint")
        .def_readonly("fraction", &ConvergencePoint::fraction)
        .def_readonly("jobs", &ConvergencePoint::jobs)
        .def_readonly("cosine", &ConvergencePoint::cosine)
        .def_readonly("users", &ConvergencePoint::users);
    py::class_<ConvergenceSeries>(m, "ConvergenceSeries")
        .def_readonly("points", &ConvergenceSeries::points)
        .def_readonly("baseline", &ConvergenceSeries::baseline);
    m.def("convergence_run",
          [](const JobStream& s, const Thresholds& th, std::size_t checkpoints) {
              return convergence_run(s, th, CheckpointSpec{checkpoints});
          },
          py::arg("stream"), py::arg("thresholds"), py::arg("checkpoints") = 200,
          py::call_guard<py::gil_scoped_release>());

    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("n_dominant", &SynthConfig::n_dominant)
        .def_property("followers_fixed",
                      [](const SynthConfig& c) { return c.followers.fixed; },
                      [](SynthConfig& c, std::size_t n) {
                          c.followers.kind = FollowerSampler::Kind::Fixed;
                          c.followers.fixed = n;
                      })
        .def("power_law_followers", [](SynthConfig& c, double exponent, std::size_t cap) {
            c.followers.kind = FollowerSampler::Kind::PowerLaw;
            c.followers.exponent = exponent;
            c.followers.cap = cap;
        }, py::arg("exponent"), py::arg("cap"))
        .def_readwrite("dominant_rate", &SynthConfig::dominant_rate)
        .def_readwrite("follower_rate", &SynthConfig::follower_rate)
        .def_readwrite("echo_probability", &SynthConfig::echo_probability)
        .def_readwrite("echo_offset", &SynthConfig::echo_offset)
        .def_readwrite("non_echo_exclusion", &SynthConfig::non_echo_exclusion)
        .def_readwrite("noise_users", &SynthConfig::noise_users)
        .def_readwrite("noise_rate", &SynthConfig::noise_rate)
        .def_readwrite("duration", &SynthConfig::duration)
        .def_readwrite("seed", &SynthConfig::seed);
    m.def("generate", [](const SynthConfig& cfg) {
        auto result = generate(cfg);
        auto truth = ground_truth_to_json(result.truth, cfg).dump();
        return std::make_pair(result.dataset.streams.begin()->second, truth);
    }, py::arg("config"), "Returns (JobStream, ground-truth JSON string).");

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return std::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Run the command-line front end; returns (exit_code, stdout, stderr).");

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
