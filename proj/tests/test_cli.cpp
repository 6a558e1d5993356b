#include <doctest.h>

#include <sys/types.h>
#include <sys/wait.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <unistd.h>

#include "oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBip = BIP_CLI_PATH;
const std::string kFixtures = BIPDB_FIXTURE_DIR;

struct RunResult {
    int code = -1;
    std::string output; // stdout + stderr
};

RunResult run(const std::string& args) {
    static int counter = 0;
    const std::string log =
        (fs::temp_directory_path() / ("bip_cli_" + std::to_string(getpid()) + "_" +
                                      std::to_string(++counter) + ".log"))
            .string();
    const std::string cmd = kBip + " " + args + " >" + log + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult result;
    result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log, std::ios::binary);
    result.output.assign(std::istreambuf_iterator<char>(in), {});
    fs::remove(log);
    return result;
}

std::string fixture_sources() {
    const std::string d = kFixtures + "/";
    return " --sources src_a:" + d + "src_a_metadata.csv:" + d + "src_a_edges.csv" +
           " --sources src_b:" + d + "src_b_metadata.csv:" + d + "src_b_edges.csv" +
           " --sources src_c:" + d + "src_c_metadata.csv:" + d + "src_c_edges.csv";
}

std::string common_flags(const std::string& out_dir) {
    return " --out-dir " + out_dir + " --graph-id fixture --current-year 2008 --k 10";
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::string> dir_listing(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace

TEST_CASE("help and version exit cleanly") {
    CHECK(run("--help").code == 0);
    const RunResult version = run("--version");
    CHECK(version.code == 0);
    CHECK(version.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("missing subcommand or unknown flags are usage errors") {
    CHECK(run("").code == 2);
    CHECK(run("--definitely-not-a-flag compute").code == 2);
    CHECK(run("compute").code == 2); // no --sources
}

TEST_CASE("pipeline produces the full artifact set and reruns byte-identically") {
    oracle::TempDir out1("cli_p1");
    oracle::TempDir out2("cli_p2");
    const std::string base = "pipeline" + fixture_sources();

    const RunResult first = run(base + common_flags(out1.path.string()));
    CAPTURE(first.output);
    REQUIRE(first.code == 0);

    const std::vector<std::string> names = dir_listing(out1.path);
    const std::vector<std::string> expected = {
        "AttRank_fixture_a0.2_b0.5_g0.3_rho0.16_w3_tc2008_error1e-12.tsv.gz",
        "CC_fixture.tsv.gz",
        "PR_fixture_a0.5_error1e-12.tsv.gz",
        "RAM_fixture_g0.6_tc2008.tsv.gz",
        "compute_report.json",
        "correlation.csv",
        "correlation.json",
        "iCC_fixture_y3.tsv.gz",
        "ingest_report.json",
        "unified_edges.csv.gz",
        "unified_metadata.csv.gz",
    };
    CHECK(names == expected);

    const RunResult second = run(base + common_flags(out2.path.string()));
    REQUIRE(second.code == 0);
    for (const std::string& name : names) {
        CAPTURE(name);
        CHECK(read_bytes(out1.path / name) == read_bytes(out2.path / name));
    }

    const json report = json::parse(read_bytes(out1.path / "ingest_report.json"));
    CHECK(report["unified"]["distinct_dois"] == 16);
    CHECK(report["unified"]["distinct_edges"] == 20);
}

TEST_CASE("ingest then compute from the unified corpus chains stages") {
    oracle::TempDir out("cli_chain");
    const std::string dir = out.path.string();
    REQUIRE(run("ingest" + fixture_sources() + common_flags(dir)).code == 0);
    REQUIRE(fs::exists(out.path / "unified_metadata.csv.gz"));

    const std::string unified = " --sources unified:" + dir + "/unified_metadata.csv.gz:" +
                                dir + "/unified_edges.csv.gz";
    REQUIRE(run("compute" + unified + common_flags(dir)).code == 0);
    CHECK(fs::exists(out.path / "CC_fixture.tsv.gz"));
    const json report = json::parse(read_bytes(out.path / "compute_report.json"));
    CHECK(report["build"]["nodes"] == 13);
    CHECK(report["build"]["edges"] == 18);
    CHECK(report["measures"]["PR"]["converged"] == true);
}

TEST_CASE("correlate and export consume existing dumps") {
    oracle::TempDir out("cli_corr");
    const std::string dir = out.path.string();
    REQUIRE(run("pipeline" + fixture_sources() + common_flags(dir)).code == 0);

    const std::string dumps =
        " --dumps " + dir + "/CC_fixture.tsv.gz" +
        " --dumps " + dir + "/iCC_fixture_y3.tsv.gz" +
        " --dumps " + dir + "/PR_fixture_a0.5_error1e-12.tsv.gz" +
        " --dumps " + dir + "/RAM_fixture_g0.6_tc2008.tsv.gz" +
        " --dumps " + dir + "/AttRank_fixture_a0.2_b0.5_g0.3_rho0.16_w3_tc2008_error1e-12.tsv.gz";

    oracle::TempDir redo("cli_corr2");
    REQUIRE(run("correlate" + dumps + common_flags(redo.path.string())).code == 0);
    // Correlating from dumps reproduces the pipeline's in-memory matrix.
    CHECK(read_bytes(redo.path / "correlation.csv") ==
          read_bytes(out.path / "correlation.csv"));

    oracle::TempDir conv("cli_conv");
    REQUIRE(run("export --no-compress --dumps " + dir + "/CC_fixture.tsv.gz --out-dir " +
                conv.path.string())
                .code == 0);
    CHECK(fs::exists(conv.path / "CC_fixture.tsv"));
    CHECK(fs::exists(conv.path / "export_report.json"));
}

TEST_CASE("invalid parameters fail before any output is written") {
    oracle::TempDir out("cli_bad");
    const std::string dir = (out.path / "fresh").string();
    const RunResult result =
        run("compute" + fixture_sources() + " --out-dir " + dir + " --pr-alpha 1.5");
    CHECK(result.code == 2);
    CHECK(result.output.find("pr_alpha") != std::string::npos);
    CHECK_FALSE(fs::exists(dir)); // directory was never created
}

TEST_CASE("config file supplies options and flags override it") {
    oracle::TempDir out("cli_conf");
    const std::string conf = out.path.string() + "/run.conf";
    const std::string d = kFixtures + "/";
    oracle::write_file(conf,
                       "graph-id=fromconf\n"
                       "current-year=2008\n"
                       "pr-alpha=0.3\n"
                       "sources=\"src_a:" + d + "src_a_metadata.csv:" + d +
                           "src_a_edges.csv\"\n");

    oracle::TempDir out_a("cli_conf_a");
    REQUIRE(run("compute --config " + conf + " --out-dir " + out_a.path.string()).code == 0);
    CHECK(fs::exists(out_a.path / "PR_fromconf_a0.3_error1e-12.tsv.gz"));

    oracle::TempDir out_b("cli_conf_b");
    REQUIRE(run("compute --config " + conf + " --pr-alpha 0.9 --graph-id flagwins" +
                " --out-dir " + out_b.path.string())
                .code == 0);
    CHECK(fs::exists(out_b.path / "PR_flagwins_a0.9_error1e-12.tsv.gz"));
}

TEST_CASE("environment variables feed options under the BIP prefix") {
    oracle::TempDir out("cli_env");
    const std::string d = kFixtures + "/";
    const std::string cmd = "env BIP_PR_ALPHA=0.7 " + kBip + " compute --sources src_a:" +
                            d + "src_a_metadata.csv:" + d + "src_a_edges.csv" +
                            " --graph-id envrun --current-year 2008 --out-dir " +
                            out.path.string() + " >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out.path / "PR_envrun_a0.7_error1e-12.tsv.gz"));
}

TEST_CASE("serve answers over HTTP until terminated") {
    oracle::TempDir out("cli_serve");
    const std::string dir = out.path.string();
    REQUIRE(run("pipeline" + fixture_sources() + common_flags(dir)).code == 0);

    std::vector<std::string> argv_strings = {
        kBip, "serve", "--listen", "127.0.0.1:0",
        "--dumps", dir + "/CC_fixture.tsv.gz",
        "--dumps", dir + "/iCC_fixture_y3.tsv.gz",
        "--dumps", dir + "/PR_fixture_a0.5_error1e-12.tsv.gz",
        "--dumps", dir + "/RAM_fixture_g0.6_tc2008.tsv.gz",
        "--dumps", dir + "/AttRank_fixture_a0.2_b0.5_g0.3_rho0.16_w3_tc2008_error1e-12.tsv.gz",
    };

    int pipe_fds[2];
    REQUIRE(pipe(pipe_fds) == 0);
    const pid_t pid = fork();
    REQUIRE(pid >= 0);
    if (pid == 0) {
        dup2(pipe_fds[1], STDOUT_FILENO);
        close(pipe_fds[0]);
        close(pipe_fds[1]);
        std::vector<char*> argv;
        for (std::string& s : argv_strings) argv.push_back(s.data());
        argv.push_back(nullptr);
        execv(kBip.c_str(), argv.data());
        _exit(127);
    }
    close(pipe_fds[1]);

    // First stdout line announces the bound port.
    std::string banner;
    char c = 0;
    FILE* from_child = fdopen(pipe_fds[0], "r");
    REQUIRE(from_child != nullptr);
    while (std::fread(&c, 1, 1, from_child) == 1 && c != '\n') banner += c;
    CAPTURE(banner);
    const size_t colon = banner.rfind(':');
    REQUIRE(colon != std::string::npos);
    int port = 0;
    for (size_t i = colon + 1; i < banner.size() && isdigit(banner[i]); ++i)
        port = port * 10 + (banner[i] - '0');
    REQUIRE(port > 0);

    {
        httplib::Client client("127.0.0.1", port);
        client.set_read_timeout(10, 0);
        auto health = client.Get("/v1/health");
        REQUIRE(health);
        CHECK(health->status == 200);
        CHECK(json::parse(health->body)["graph_id"] == "fixture");
        auto one = client.Get("/v1/scores/10.1000/alpha");
        REQUIRE(one);
        CHECK(one->status == 200);
        CHECK(json::parse(one->body)["scores"]["cc"] == 4.0);
    }

    kill(pid, SIGTERM);
    int status = 0;
    waitpid(pid, &status, 0);
    CHECK(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    fclose(from_child);
}
