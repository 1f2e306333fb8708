#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ri1d/evolution_integrator.hpp"
#include "ri1d/trajectory.hpp"
#include "run.hpp"

using namespace ri1d;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "ri1d_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_args(std::vector<std::string> args) {
    args.insert(args.begin(), "ri1d");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::main_entry(int(argv.size()), argv.data());
}

cli::RunConfig config(const std::string& command, const fs::path& out) {
    cli::RunConfig c;
    c.command = command;
    c.out = out.string();
    return c;
}

} // namespace

TEST(Cli, SolveLocalQuadraticModelFile) {
    const fs::path d = scratch("local");
    std::ofstream(d / "quadratic.txt") << "family=separable\nW.coeffs=0,0,0.5\nloading.coeffs=0,1\ndomain.T=2\ndomain.L=3\n";
    auto c = config("solve-local", d);
    c.model = (d / "quadratic.txt").string();
    std::ostringstream log;
    ASSERT_EQ(cli::run(c, log), 0) << log.str();
    std::ifstream in(d / "trajectory.csv");
    const Trajectory tr = read_csv(in);
    EXPECT_EQ(tr.size(), 2001u);
    std::ifstream ev(d / "events.csv");
    EXPECT_FALSE(read_events_csv(ev).empty());
    std::ifstream pl(d / "plot.dat");
    EXPECT_EQ(read_plot(pl).size(), 2001u);
    const auto report = nlohmann::json::parse(slurp(d / "report.json"));
    EXPECT_EQ(report["rows"], 2001);
    EXPECT_EQ(report["verdict"], "pass");
}

TEST(Cli, AuditOfHandEditedTrajectoryFails) {
    const fs::path d = scratch("audit");
    auto c = config("solve-local", d);
    c.model = "quadratic";
    std::ostringstream log;
    ASSERT_EQ(cli::run(c, log), 0);
    std::ifstream in(d / "trajectory.csv");
    Trajectory tr = read_csv(in);
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (tr.times[k] > 1.5 + 1e-12) tr.values[k] -= 0.5;
    {
        std::ofstream out(d / "edited.csv");
        write_csv(tr, out);
    }
    auto a = config("audit", d / "out");
    a.model = "quadratic";
    a.traj = (d / "edited.csv").string();
    EXPECT_EQ(cli::run(a, log), 1);
    const auto report = nlohmann::json::parse(slurp(d / "out" / "report.json"));
    EXPECT_FALSE(report["stability"]["pass"].get<bool>());
    EXPECT_GT(report["stability"]["time"].get<double>(), 1.5);
    EXPECT_NEAR(report["stability"]["residual"].get<double>(), 0.5, 1e-9);
}

TEST(Cli, ConstructCantorThenAuditIsNotSbv) {
    const fs::path d = scratch("construct");
    auto c = config("construct", d);
    c.driver = "cantor level=5";
    std::ostringstream log;
    ASSERT_EQ(cli::run(c, log), 0) << log.str();
    auto a = config("audit", d / "audit");
    a.model = (d / "model.txt").string();
    a.traj = (d / "trajectory.csv").string();
    a.sbv = true;
    EXPECT_EQ(cli::run(a, log), 0) << log.str();
    const auto report = nlohmann::json::parse(slurp(d / "audit" / "report.json"));
    EXPECT_EQ(report["sbv"]["verdict"], "not SBV");
}

TEST(Cli, OutputsAreDeterministic) {
    for (const std::string cmd : {"solve-energetic", "audit"}) {
        std::string first;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path d = scratch("det");
            auto c = config("solve-energetic", d);
            c.model = "double-well";
            c.has_x0 = true;
            c.x0 = -1.0;
            std::ostringstream log;
            cli::run(c, log);
            std::string all = slurp(d / "trajectory.csv") + slurp(d / "events.csv") + slurp(d / "report.json");
            if (cmd == "audit") {
                auto a = config("audit", d / "a");
                a.model = "double-well";
                a.traj = (d / "trajectory.csv").string();
                a.sbv = a.balance = true;
                cli::run(a, log);
                all = slurp(d / "a" / "report.json");
            }
            if (rep == 0) first = all;
            else EXPECT_EQ(all, first) << cmd;
        }
    }
}

TEST(Cli, ReportNumbersCarrySeventeenDigits) {
    const fs::path d = scratch("digits");
    auto c = config("gap", d);
    c.model = "double-well";
    std::ostringstream log;
    ASSERT_EQ(cli::run(c, log), 0);
    const std::string s = slurp(d / "report.json");
    const auto pos = s.find("\"epsilon\": ");
    ASSERT_NE(pos, std::string::npos);
    const std::string num = s.substr(pos + 11, s.find_first_of(",\n", pos) - pos - 11);
    int digits = 0;
    for (char ch : num.substr(0, num.find('e'))) digits += std::isdigit(static_cast<unsigned char>(ch)) ? 1 : 0;
    EXPECT_GE(digits, 17);
}

TEST(Cli, ExitCodes) {
    const fs::path d = scratch("codes");
    const std::string out = (d / "o").string();
    EXPECT_EQ(run_args({"solve-local", "--model", "no-such-model", "--out", out}), 2);
    EXPECT_EQ(run_args({"solve-local", "--model", "quadratic", "--dt", "-1", "--out", out}), 2);
    EXPECT_EQ(run_args({"solve-local", "--model", "quadratic", "--T", "5", "--out", out}), 2);
    EXPECT_EQ(run_args({"audit", "--model", "quadratic", "--traj", (d / "missing.csv").string(), "--out", out}), 2);
    EXPECT_EQ(run_args({"gap", "--model", "quadratic", "--box", "0,1,2", "--out", out}), 2);
    EXPECT_EQ(run_args({"frobnicate"}), 2);
    EXPECT_EQ(run_args({}), 2);
    std::ofstream(d / "bad.txt") << "family=separable\nW.coeffs=0,x\n";
    EXPECT_EQ(run_args({"solve-local", "--model", (d / "bad.txt").string(), "--out", out}), 2);
    EXPECT_EQ(run_args({"gap", "--model", "quadratic", "--box", "0,2,-3,3", "--resolution", "64", "--out", out}), 0);
    EXPECT_EQ(run_args({"check-hypotheses", "--model", "double-well", "--hypotheses", "H5", "--resolution", "64",
                        "--out", out}),
              0);
}

TEST(Cli, EveryFileRoundTrips) {
    const fs::path d = scratch("roundtrip");
    auto c = config("solve-energetic", d);
    c.model = "double-well";
    c.has_x0 = true;
    c.x0 = -1.0;
    std::ostringstream log;
    ASSERT_EQ(cli::run(c, log), 0) << log.str();
    std::ifstream tin(d / "trajectory.csv"), pin(d / "plot.dat"), ein(d / "events.csv");
    const Trajectory a = read_csv(tin), b = read_plot(pin);
    const auto ev = read_events_csv(ein);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_EQ(a.jumps.size(), 1u);
    ASSERT_EQ(b.jumps.size(), 1u);
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0].kind, EventKind::jump);
    EXPECT_EQ(ev[0].t, a.jumps[0].time);
    EXPECT_NO_THROW(nlohmann::json::parse(slurp(d / "report.json")));
}
