#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "app.hpp"
#include "ddae/errors.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string output;
};

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ddae_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Outcome run_cli(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "cli.log";
    const std::string cmd = std::string(DDAE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    Outcome out;
    out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    out.output = ss.str();
    return out;
}

std::string first_line(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path write_file(const fs::path& path, const std::string& text) {
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("cli: region") {
    const fs::path dir = scratch("region");
    const auto r = run_cli("region --preset b-eq-a --theta 0.5 --nx 40 --ny 30 --out " + dir.string(), dir);
    CHECK_MESSAGE(r.code == 0, r.output);
    CHECK(first_line(dir / "region.csv") == "re,im,rho,stable");
    CHECK(fs::exists(dir / "region.pgm"));
    const auto manifest = nlohmann::json::parse(std::ifstream(dir / "manifest.json"));
    CHECK(manifest.at("command") == "region");
    CHECK(manifest.contains("model_hash"));
    CHECK(manifest.contains("version"));
    CHECK(manifest.at("outputs").size() == 2);
}

TEST_CASE("cli: flag errors exit with 2") {
    const fs::path dir = scratch("flags");
    CHECK(run_cli("region --theta 2", dir).code == 2);
    CHECK(run_cli("region --preset nope --out " + dir.string(), dir).code == 2);
    CHECK(run_cli("region --rule b=xa --out " + dir.string(), dir).code == 2);
    CHECK(run_cli("frobnicate", dir).code == 2);
    CHECK(run_cli("simulate --model scalar_dde --param zeta=1 --out " + dir.string(), dir).code == 2);
    CHECK(run_cli("simulate --h -0.1", dir).code == 2);
    CHECK(run_cli("", dir).code == 2);
}

TEST_CASE("cli: simulate") {
    const fs::path dir = scratch("simulate");
    const auto r = run_cli("simulate --model multi_delay_chain --beta 0 --h 0.02 --t-end 2 --event t=1,kick=0.01 --out " +
                               dir.string(),
                           dir);
    CHECK_MESSAGE(r.code == 0, r.output);
    CHECK(first_line(dir / "trajectory.csv") == "t,x1,x2,x3,x4,y1,y2");
    const auto run = nlohmann::json::parse(std::ifstream(dir / "run.json"));
    CHECK(run.at("status") == "completed");
    CHECK(run.at("max_g_residual").get<double>() <= 1e-9);
    CHECK(run.contains("growth_rate"));
}

TEST_CASE("cli: divergence is not an error") {
    const fs::path dir = scratch("diverge");
    const auto r = run_cli("simulate --a 5 --b 0 --h 0.1 --t-end 100 --out " + dir.string(), dir);
    CHECK_MESSAGE(r.code == 0, r.output);
    const auto run = nlohmann::json::parse(std::ifstream(dir / "run.json"));
    CHECK(run.at("status") == "diverged");
}

TEST_CASE("cli: Newton failure exits with 3") {
    const fs::path dir = scratch("newton");
    const auto model = write_file(dir / "singular.json",
                                  R"({"linear":{"h":0.1,"E":[[1,0],[0,0]],"A0":[[-1,0],[0,0]],"Ak":[[[0,0],[0,0]]]}})");
    const auto r = run_cli("simulate --model " + model.string() + " --h 0.1 --t-end 1 --out " + dir.string(), dir);
    CHECK_MESSAGE(r.code == 3, r.output);
    CHECK(r.output.find("step 1") != std::string::npos);
}

TEST_CASE("cli: pencil") {
    const fs::path dir = scratch("pencil");
    const auto r = run_cli("pencil --model scalar_dde --h 0.05 --out " + dir.string(), dir);
    CHECK_MESSAGE(r.code == 0, r.output);
    CHECK(first_line(dir / "exact.csv") == "re,im,damping,domain,residual");
    CHECK(first_line(dir / "deformed.csv") == "re,im,damping,domain,residual");
    CHECK(first_line(dir / "report.csv").rfind("kind,re_exact,im_exact", 0) == 0);
    const auto summary = nlohmann::json::parse(std::ifstream(dir / "summary.json"));
    CHECK(summary.at("exact").contains("stiffness_ratio"));

    const fs::path sweep = scratch("pencil_sweep");
    const auto s = run_cli("pencil --model scalar_dde --h-sweep 0.01:0.1:log3 --out " + sweep.string(), sweep);
    CHECK_MESSAGE(s.code == 0, s.output);
    CHECK(fs::exists(sweep / "sweep.csv"));
}

TEST_CASE("cli: matching failure exits with 5") {
    const fs::path dir = scratch("match");
    const auto model = write_file(dir / "real.json", R"({"linear":{"h":0.1,"E":[[1]],"A0":[[-1]],"Ak":[[[0]]]}})");
    const auto r = run_cli("theta-match --model " + model.string() + " --h-list 0.1 --out " + dir.string(), dir);
    CHECK_MESSAGE(r.code == 5, r.output);
    CHECK(r.output.find("phi") != std::string::npos);
    CHECK(fs::exists(dir / "theta_match.csv"));
}

TEST_CASE("cli: theta-match success") {
    const fs::path dir = scratch("match_ok");
    const auto r = run_cli("theta-match --model scalar_dde --h-list 0.04,0.02 --out " + dir.string(), dir);
    CHECK_MESSAGE(r.code == 0, r.output);
    std::ifstream in(dir / "theta_match.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("h,status,theta_zeta", 0) == 0);
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.find(",ok,") != std::string::npos);
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("cli: replay reproduces outputs byte for byte") {
    const fs::path dir = scratch("replay");
    REQUIRE(run_cli("pencil --model multi_delay_chain --beta 1.01 --h 0.02 --out " + dir.string(), dir).code == 0);
    const auto r = run_cli("replay " + (dir / "manifest.json").string(), dir);
    CHECK_MESSAGE(r.code == 0, r.output);
    CHECK(r.output.find("replay identical") != std::string::npos);

    // A recorded hash that no longer matches is reported.
    auto manifest = nlohmann::json::parse(std::ifstream(dir / "manifest.json"));
    for (const auto& entry : manifest.at("outputs")) {
        CHECK(entry.at("fnv1a").get<std::string>().size() == 16);
    }
    manifest["outputs"][0]["fnv1a"] = "0000000000000000";
    std::ofstream(dir / "tampered.json") << manifest.dump(2);
    const fs::path other = scratch("replay_other");
    const auto again = run_cli("replay " + (dir / "tampered.json").string() + " --out " + other.string(), other);
    CHECK(again.code == 1);
}

TEST_CASE("cli: replay is byte-identical for every command") {
    const std::vector<std::pair<std::string, std::string>> runs{
        {"region", "region --preset a-eq-0.85b --nx 30 --ny 20"},
        {"simulate", "simulate --model delayed_oscillator --h 0.05 --t-end 3"},
        {"sweep", "pencil --model scalar_dde --h-sweep 0.05:0.2:lin3"},
        {"match", "theta-match --model scalar_dde --h-list 0.04"},
    };
    for (const auto& [name, args] : runs) {
        CAPTURE(name);
        const fs::path dir = scratch("replay_" + name);
        REQUIRE(run_cli(args + " --out " + dir.string(), dir).code == 0);
        const auto manifest = nlohmann::json::parse(std::ifstream(dir / "manifest.json"));
        for (const auto& entry : manifest.at("outputs")) {
            CHECK(fs::file_size(dir / entry.at("file").get<std::string>()) > 0);
            CHECK(entry.at("fnv1a") != "cbf29ce484222325");  // hash of an empty file
        }
        const fs::path other = scratch("replay_" + name + "_again");
        const auto r = run_cli("replay " + (dir / "manifest.json").string() + " --out " + other.string(), other);
        CHECK_MESSAGE(r.code == 0, r.output);
    }
}

TEST_CASE("cli: exception mapping") {
    using namespace ddae;
    auto code = [](auto e) { return cli::exit_code(std::make_exception_ptr(e)); };
    CHECK(code(ConfigError("x")) == 2);
    CHECK(code(DimensionError("x")) == 2);
    CHECK(code(PoleError("x")) == 2);
    CHECK(code(NoConvergence("x", 20, 1.0)) == 3);
    CHECK(code(SingularIteration("x")) == 3);
    CHECK(code(SingularJacobian("x")) == 3);
    CHECK(code(EigensolveError("x")) == 4);
    CHECK(code(NoSignChange("x", 0.1, 0.2)) == 5);
    CHECK(code(TrackingLost("x")) == 5);
    CHECK(code(ConvergenceError("x")) == 5);
    CHECK(code(std::runtime_error("x")) == 1);
}
