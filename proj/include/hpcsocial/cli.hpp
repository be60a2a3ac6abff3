#pragma once

#include "hpcsocial/report.hpp"
#include "hpcsocial/sim_offline.hpp"
#include "hpcsocial/stats.hpp"
#include "hpcsocial/synth.hpp"
#include "hpcsocial/trace.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hpcsocial {

/// "1800", "90s", "30m", "0.5h", "6h" -> whole seconds (> 0). ConfigError otherwise.
Seconds parse_duration(std::string_view text);
/// "0.5" or "50%" -> fraction strictly inside (0, 1). ConfigError otherwise.
double parse_fraction(std::string_view text);
/// "200" (count) or "0.1,0.5,1" (explicit fractions).
CheckpointSpec parse_checkpoints(std::string_view text);

/// Fully resolved settings of one run; serialized as run.json.
struct RunConfig {
    std::string command;

    std::string input;
    TraceFormat format = TraceFormat::Delimited;
    ColumnMap columns = canonical_columns();
    NormalizeOptions filter;

    Seconds c_job = 1800;
    std::vector<double> c_users{0.5};
    CheckpointSpec checkpoints;
    bool include_self = true;
    FitTarget fit_target = FitTarget::Probability;

    SynthConfig synth;

    /// Digest of the input bytes, filled in when the input is read.
    std::string input_digest;
    /// Not serialized: neither affects the produced bytes.
    unsigned threads = 0;
    std::string out = ".";

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
};

/// File-name tag for a user threshold: 0.5 -> "cu50".
std::string c_user_tag(double c_user);

OutputBundle cmd_analyze(RunConfig cfg);
OutputBundle cmd_stream(RunConfig cfg);
OutputBundle cmd_synth(RunConfig cfg);
OutputBundle cmd_cdf(RunConfig cfg);
/// Dispatches on cfg.command.
OutputBundle run_command(const RunConfig& cfg);

/// Entry point of the `hpcsocial` executable. Exit codes: 0 success,
/// 2 usage error, 1 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpcsocial
