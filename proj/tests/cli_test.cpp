#include "hpcsocial/cli.hpp"
#include "hpcsocial/error.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace hpcsocial;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("hpcsocial_cli_" + std::string(info->name()) + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name).string();
    }

    static std::string read(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return run_cli(args, out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

// A at {0, 3600, 7200}; B at {600, 3000, 6000, 9900}.
const char* kThreeOfFour = "user,time\nA,0\nB,600\nB,3000\nA,3600\nB,6000\nA,7200\nB,9900\n";

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(ParseDuration, AcceptedForms) {
    EXPECT_EQ(parse_duration("1800"), 1800);
    EXPECT_EQ(parse_duration("90s"), 90);
    EXPECT_EQ(parse_duration("30m"), 1800);
    EXPECT_EQ(parse_duration("0.5h"), 1800);
    EXPECT_EQ(parse_duration("6h"), 21600);
    EXPECT_THROW(parse_duration("0"), ConfigError);
    EXPECT_THROW(parse_duration("-5m"), ConfigError);
    EXPECT_THROW(parse_duration("abc"), ConfigError);
    EXPECT_THROW(parse_duration("5x"), ConfigError);
}

TEST(ParseFraction, AcceptedForms) {
    EXPECT_EQ(parse_fraction("0.5"), 0.5);
    EXPECT_EQ(parse_fraction("80%"), 0.8);
    EXPECT_THROW(parse_fraction("1"), ConfigError);
    EXPECT_THROW(parse_fraction("0%"), ConfigError);
    EXPECT_THROW(parse_fraction("150%"), ConfigError);
}

TEST(ParseCheckpoints, CountOrList) {
    EXPECT_EQ(std::get<std::size_t>(parse_checkpoints("200").grid), 200u);
    EXPECT_EQ(std::get<std::vector<double>>(parse_checkpoints("0.1,0.5,1").grid),
              (std::vector<double>{0.1, 0.5, 1.0}));
    EXPECT_THROW(parse_checkpoints("x"), ConfigError);
}

TEST(CUserTag, Percent) {
    EXPECT_EQ(c_user_tag(0.5), "cu50");
    EXPECT_EQ(c_user_tag(0.8), "cu80");
}

TEST_F(CliTest, AnalyzeWritesMatrixAndFollowers) {
    const auto in = write("pair.csv", kThreeOfFour);
    ASSERT_EQ(run({"analyze", "--input", in, "--out", path("out").string()}), 0) << err_.str();
    const auto matrix = lines(read(path("out/sim_matrix.csv")));
    ASSERT_EQ(matrix.size(), 3u);
    EXPECT_EQ(matrix[0], "user,A,B");
    EXPECT_EQ(matrix[1], "A,1.000000,1.000000");
    EXPECT_EQ(matrix[2], "B,0.750000,1.000000");

    EXPECT_EQ(read(path("out/follower_counts_cu50.csv")), "user,followers\nA,2\nB,2\n");
    const auto summary = nlohmann::json::parse(read(path("out/summary.json")));
    EXPECT_EQ(summary.at("users"), 2);
    EXPECT_EQ(summary.at("jobs"), 7);
    EXPECT_TRUE(fs::exists(path("out/run.json")));
    EXPECT_TRUE(fs::exists(path("out/power_law_cu50.json")));
}

TEST_F(CliTest, ThresholdSweepIsAntiMonotone) {
    std::string text = "user,time\n";
    for (int k = 0; k < 400; ++k) {
        text += "u" + std::to_string((k * 7) % 13) + "," + std::to_string(k * 397) + "\n";
    }
    const auto in = write("sweep.csv", text);
    ASSERT_EQ(run({"analyze", "-i", in, "--c-user", "50%", "--c-user", "0.8", "-o", path("o").string()}), 0)
        << err_.str();
    const auto loose = lines(read(path("o/follower_counts_cu50.csv")));
    const auto strict = lines(read(path("o/follower_counts_cu80.csv")));
    ASSERT_EQ(loose.size(), strict.size());
    for (std::size_t k = 1; k < loose.size(); ++k) {
        const auto a = std::stoul(loose[k].substr(loose[k].find(',') + 1));
        const auto b = std::stoul(strict[k].substr(strict[k].find(',') + 1));
        EXPECT_LE(b, a) << loose[k];
    }
}

TEST_F(CliTest, EmptyTraceIsRuntimeError) {
    const auto in = write("empty.csv", "user,time\n");
    EXPECT_EQ(run({"analyze", "--input", in, "--out", path("o").string()}), 1);
    EXPECT_NE(err_.str().find("empty trace"), std::string::npos) << err_.str();
    EXPECT_FALSE(fs::exists(path("o")));
}

TEST_F(CliTest, MissingFileIsRuntimeError) {
    EXPECT_EQ(run({"analyze", "--input", path("nope.csv").string(), "--out", path("o").string()}), 1);
}

TEST_F(CliTest, UsageErrors) {
    const auto in = write("pair.csv", kThreeOfFour);
    EXPECT_EQ(run({}), 2);
    EXPECT_EQ(run({"analyze"}), 2);
    EXPECT_EQ(run({"bogus"}), 2);
    EXPECT_EQ(run({"analyze", "-i", in, "--c-user", "1.5", "-o", path("o").string()}), 2);
    EXPECT_EQ(run({"analyze", "-i", in, "--c-job", "0", "-o", path("o").string()}), 2);
    EXPECT_EQ(run({"analyze", "-i", in, "--format", "xml"}), 2);
    EXPECT_FALSE(fs::exists(path("o")));
    EXPECT_EQ(run({"--help"}), 0);
    EXPECT_NE(out_.str().find("analyze"), std::string::npos);
}

TEST_F(CliTest, UnknownGroupIsRuntimeError) {
    const auto in = write("g.csv", "user,time,group\na,1,x\nb,2,y\n");
    EXPECT_EQ(run({"analyze", "-i", in, "--group-col", "2", "--group", "z", "-o", path("o").string()}), 1);
    EXPECT_NE(err_.str().find("x"), std::string::npos);
}

TEST_F(CliTest, StreamCheckpointsAndAgreementWithAnalyze) {
    std::string text = "user,time\n";
    for (int k = 0; k < 300; ++k) {
        text += "u" + std::to_string((k * k) % 11) + "," + std::to_string(k * 211) + "\n";
    }
    const auto in = write("t.csv", text);
    ASSERT_EQ(run({"stream", "-i", in, "--checkpoints", "4", "-o", path("s").string()}), 0) << err_.str();
    ASSERT_EQ(run({"analyze", "-i", in, "-o", path("a").string()}), 0) << err_.str();

    const auto series = lines(read(path("s/convergence_cu50.csv")));
    ASSERT_EQ(series.size(), 6u);  // header + 4 interior + final
    EXPECT_EQ(series[0], "fraction,jobs,cosine,users");
    EXPECT_EQ(series.back().rfind("1.0,300,1.0,", 0), 0u) << series.back();

    EXPECT_EQ(read(path("s/follower_counts_cu50.csv")), read(path("a/follower_counts_cu50.csv")));
    EXPECT_EQ(lines(read(path("s/online_matrix.csv"))), lines(read(path("a/sim_matrix.csv"))));
}

TEST_F(CliTest, SynthIsDeterministicAndRecoverable) {
    const std::vector<std::string> base{"synth", "--seed", "9", "--n-dominant", "3", "--followers", "2",
                                        "--echo-prob", "1", "--duration", "10d"};
    auto a = base;
    a.insert(a.end(), {"--out", path("a").string()});
    auto b = base;
    b.insert(b.end(), {"--out", path("b").string()});
    ASSERT_EQ(run(a), 0) << err_.str();
    ASSERT_EQ(run(b), 0) << err_.str();
    EXPECT_EQ(read(path("a/trace.csv")), read(path("b/trace.csv")));
    EXPECT_EQ(read(path("a/ground_truth.json")), read(path("b/ground_truth.json")));

    ASSERT_EQ(run({"analyze", "-i", path("a/trace.csv").string(), "-o", path("r").string()}), 0) << err_.str();
    const auto truth = nlohmann::json::parse(read(path("a/ground_truth.json")));
    const auto edges = read(path("r/followers_cu50.csv"));
    for (const auto& e : truth.at("edges")) {
        const auto line = e.at("follower").get<std::string>() + "," + e.at("dominant").get<std::string>() + ",";
        EXPECT_NE(edges.find("\n" + line), std::string::npos) << line;
    }
}

TEST_F(CliTest, SynthRejectsInvalidProbability) {
    EXPECT_EQ(run({"synth", "--echo-prob", "1.5", "--out", path("o").string()}), 2);
    EXPECT_FALSE(fs::exists(path("o")));
}

TEST_F(CliTest, CdfReport) {
    const auto in = write("c.csv", "user,time\na,0\nb,10\na,20\nc,40\nd,5000\n");
    ASSERT_EQ(run({"cdf", "-i", in, "-o", path("c").string()}), 0) << err_.str();
    const auto rows = lines(read(path("c/interarrival_cdf.csv")));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "gap_seconds,cum_fraction");
    EXPECT_EQ(rows[1], "10,0.5");
    EXPECT_EQ(rows[2], "20,0.75");
    EXPECT_EQ(rows[3], "4960,1.0");
    const auto report = nlohmann::json::parse(read(path("c/cdf_report.json")));
    EXPECT_EQ(report.at("within_1800s"), 0.75);
    EXPECT_EQ(report.at("gaps"), 4);
}

TEST_F(CliTest, RerunIsByteIdentical) {
    const auto in = write("pair.csv", kThreeOfFour);
    ASSERT_EQ(run({"analyze", "-i", in, "--c-user", "0.5", "--c-user", "0.7", "-o", path("a").string()}), 0);
    ASSERT_EQ(run({"rerun", path("a/run.json").string(), "-o", path("b").string()}), 0) << err_.str();
    for (const auto& entry : fs::directory_iterator(path("a"))) {
        EXPECT_EQ(read(entry.path()), read(path("b") / entry.path().filename())) << entry.path();
    }

    write("pair.csv", std::string(kThreeOfFour) + "C,20000\n");
    EXPECT_EQ(run({"rerun", path("a/run.json").string(), "-o", path("c").string()}), 1);
    EXPECT_FALSE(fs::exists(path("c")));
}

TEST_F(CliTest, FailedRunLeavesExistingOutputsUntouched) {
    const auto in = write("pair.csv", kThreeOfFour);
    ASSERT_EQ(run({"analyze", "-i", in, "-o", path("o").string()}), 0);
    const auto before = read(path("o/sim_matrix.csv"));
    const auto empty = write("empty.csv", "user,time\n");
    EXPECT_EQ(run({"analyze", "-i", empty, "-o", path("o").string()}), 1);
    EXPECT_EQ(read(path("o/sim_matrix.csv")), before);
    for (const auto& entry : fs::directory_iterator(dir_)) {
        EXPECT_EQ(entry.path().filename().string().find(".staging"), std::string::npos);
    }
}

TEST_F(CliTest, ExecutableExitCodes) {
    const char* exe = std::getenv("HPCSOCIAL_CLI");
    if (exe == nullptr) GTEST_SKIP() << "HPCSOCIAL_CLI not set";
    const auto in = write("pair.csv", kThreeOfFour);
    const auto quiet = " >/dev/null 2>&1";
    auto code = [&](const std::string& args) {
        const int status = std::system((std::string(exe) + " " + args + quiet).c_str());
        return WEXITSTATUS(status);
    };
    EXPECT_EQ(code("analyze -i " + in + " -o " + path("o").string()), 0);
    EXPECT_EQ(code("analyze --c-user 2 -i " + in), 2);
    EXPECT_EQ(code("analyze -i " + path("missing.csv").string() + " -o " + path("m").string()), 1);
}
