#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// End-to-end checks of the installed binary: exit codes, stdin/stdout
// plumbing, flag validation. The full pipeline goldens live in the
// acceptance suite.

namespace {

const std::string kCli = TB_CLI_PATH;
const std::filesystem::path kFixtures = TB_FIXTURE_DIR;

struct CommandResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

CommandResult run_command(const std::string& command) {
    const std::string full = command + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult result;
    std::array<char, 4096> buffer{};
    std::size_t n = 0;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path temp_out(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() /
               ("toonbench-cli-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("--help exits 0 for every subcommand") {
    CHECK(run_command(kCli + " --help").exit_code == 0);
    for (const char* sub : {"run", "score", "compare", "sweep", "report", "convert", "validate"}) {
        auto res = run_command(kCli + " " + sub + " --help");
        CHECK(res.exit_code == 0);
        CHECK(res.output.find("--") != std::string::npos);  // prints its flag set
    }
}

TEST_CASE("unknown flags are rejected with exit 2") {
    CHECK(run_command(kCli + " run --nope").exit_code == 2);
    CHECK(run_command(kCli + " definitely-not-a-subcommand").exit_code == 2);
}

TEST_CASE("replay mode requires a replay file") {
    auto res = run_command(kCli + " run --corpus " + (kFixtures / "corpus.jsonl").string() +
                           " --backend replay --out " + temp_out("r.jsonl").string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("weight invariant violations exit 2") {
    auto res = run_command(kCli + " score --records x.jsonl --corpus y.jsonl --alpha 0.3 "
                           "--beta 0.8 --out " + temp_out("s").string());
    CHECK(res.exit_code == 2);
}

TEST_CASE("unreachable live backend exits 1") {
    auto cfg = temp_out("dead.json");
    std::ofstream(cfg) << "{\"backend_url\":\"http://127.0.0.1:9\",\"max_retries\":1}";
    auto res = run_command(kCli + " run --corpus " + (kFixtures / "corpus.jsonl").string() +
                           " --backend http --config " + cfg.string() + " --formats json --out " +
                           temp_out("live.jsonl").string());
    CHECK(res.exit_code == 1);
}

TEST_CASE("convert pipes between formats") {
    auto res = run_command("echo '{\"users\":[{\"id\":1,\"name\":\"Alice\"},{\"id\":2,\"name\":\"Bob\"}]}' | " +
                           kCli + " convert --from json --to toon");
    CHECK(res.exit_code == 0);
    CHECK(res.output == "users[2]{id,name}:\n  1,Alice\n  2,Bob");

    auto identity = run_command("printf '{\"a\":1}' | " + kCli + " convert --from json --to json");
    CHECK(identity.exit_code == 0);
    CHECK(identity.output == "{\"a\":1}");

    CHECK(run_command("printf '{\"a\":' | " + kCli + " convert --from json --to toon").exit_code == 1);
    CHECK(run_command("printf '{\"a\":1,\"b\":2}' | " + kCli + " convert --from json --to xml").exit_code == 2);
    CHECK(run_command("printf 'x' | " + kCli + " convert --from json --to ini").exit_code == 2);
}

TEST_CASE("validate reports grammar verdicts") {
    CHECK(run_command("printf 'xs[2]: 1,2' | " + kCli + " validate --format toon").exit_code == 0);
    CHECK(run_command("printf 'xs[3]: 1,2' | " + kCli + " validate --format toon").exit_code == 1);
    CHECK(run_command("printf '{\"a\":1}' | " + kCli + " validate --format json").exit_code == 0);
    CHECK(run_command("printf 'a: [1,2]' | " + kCli + " validate --format yaml").exit_code == 1);
}

TEST_CASE("gamma 0 and 1 degenerate the env column in the summary") {
    auto out_records = temp_out("records.jsonl");
    auto res = run_command(kCli + " run --corpus " + (kFixtures / "corpus.jsonl").string() +
                           " --config " + (kFixtures / "config.json").string() +
                           " --backend replay --replay-file " +
                           (kFixtures / "replay.jsonl").string() + " --out " +
                           out_records.string());
    REQUIRE(res.exit_code == 0);
    CHECK(res.output.find("48 records") != std::string::npos);

    auto g0 = temp_out("g0");
    auto score = run_command(kCli + " score --records " + out_records.string() + " --corpus " +
                             (kFixtures / "corpus.jsonl").string() + " --gamma 0 --out " +
                             g0.string());
    REQUIRE(score.exit_code == 0);

    std::ifstream summary(g0 / "summary.csv");
    REQUIRE(summary.good());
    std::string line;
    std::map<std::string, std::string> gcs_rows, env_rows;
    while (std::getline(summary, line)) {
        std::stringstream ss(line);
        std::string model, format, metric, n, mean, sd;
        std::getline(ss, model, ',');
        std::getline(ss, format, ',');
        std::getline(ss, metric, ',');
        std::getline(ss, n, ',');
        std::getline(ss, mean, ',');
        std::getline(ss, sd, ',');
        if (metric == "gcs") gcs_rows[format] = mean;
        if (metric == "gcs_env") env_rows[format] = mean;
    }
    REQUIRE(gcs_rows.size() == 4);
    for (const auto& [format, mean] : env_rows) CHECK(mean == gcs_rows[format]);
}
