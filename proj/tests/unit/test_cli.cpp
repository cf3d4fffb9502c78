#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>

#include "../support/fixtures.hpp"
#include "sdnet/cli.hpp"

using namespace sdnet;
using io::json;
namespace fs = std::filesystem;

namespace {

const char* kXor = R"({
  "k": 1, "l": 1, "state_alphabet": 2, "input_alphabets": [2], "output_alphabets": [2],
  "w": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
  "state_process": {"iid": [0.5, 0.5]}
})";

const char* kSingleUser = R"({"message_sizes": [2], "encoder_inputs": [[0]], "decoder_demands": [[0]]})";

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json xor_config() {
  return {{"network", "xor.json"},
          {"topology", json::parse(kSingleUser)},
          {"scheme", {{"brute_force", {{"n", 3}}}}},
          {"reduction", {{"delta", 1.0 / 3.0}, {"p", 0.1}}},
          {"evaluation", {{"seed", 1}}}};
}

struct Run {
  int status;
  json report;
  std::string diag;
};

Run run(const fs::path& dir, const std::string& cmd, const json& config, unsigned workers = 1,
        std::optional<std::uint64_t> seed = std::nullopt, const std::string& out = "out") {
  const auto cfg = dir / (cmd + "_config.json");
  write_text(cfg, config.dump(2));
  std::ostringstream diag;
  cli::Invocation inv{cmd, cfg, workers, dir / out, seed};
  const int status = cli::run(inv, diag);
  const char* name = cmd == "validate"   ? "validation_report.json"
                     : cmd == "simulate" ? "simulation_report.json"
                     : cmd == "reduce"   ? "reduction_report.json"
                                         : "verification_report.json";
  return {status, io::read_json(dir / out / name), diag.str()};
}

}  // namespace

TEST_CASE("verify on the XOR example") {
  const auto dir = fixtures::scratch_dir("cli_verify");
  write_text(dir / "xor.json", kXor);
  const auto r = run(dir, "verify", xor_config());
  CHECK(r.status == 0);
  CHECK(r.report["status"] == "ok");
  CHECK(r.report["verification"]["equality_residual"] == 0.0);
  CHECK(r.report["verification"]["n_bar"] == 5);
  CHECK(r.report["verification"]["mode"] == "exact");
  CHECK(r.report.contains("generated_at"));
  CHECK(r.report["provenance"]["seeds"]["evaluation"] == 1);
  const auto csv = read_text(dir / "out" / "summary.csv");
  CHECK(csv.rfind("n,n_bar,delta,p,pr_A,err_nc_cond,err_c,bound_3p,residual,mode\n", 0) == 0);
  CHECK(csv.find("3,5,") != std::string::npos);
}

TEST_CASE("validate reports a non-normalized slice") {
  const auto dir = fixtures::scratch_dir("cli_validate");
  auto net = json::parse(kXor);
  net["w"][1][1] = json::array({0.6, 0.5});
  write_text(dir / "xor.json", net.dump());
  const auto r = run(dir, "validate", xor_config());
  CHECK(r.status == 1);
  CHECK(r.report["status"] == "validation-failure");
  REQUIRE(r.report["network"]["violations"].size() == 1);
  CHECK(r.report["network"]["violations"][0]["slice"] == 3);
  CHECK(r.report["network"]["violations"][0]["sum"].get<double>() == doctest::Approx(1.1));
  CHECK(r.diag.find("slice 3") != std::string::npos);
}

TEST_CASE("validate accepts the XOR example") {
  const auto dir = fixtures::scratch_dir("cli_validate_ok");
  write_text(dir / "xor.json", kXor);
  const auto r = run(dir, "validate", xor_config());
  CHECK(r.status == 0);
  CHECK(r.report["network"]["valid"] == true);
  CHECK(r.report["scheme"]["valid"] == true);
  CHECK(r.report["scheme"]["n"] == 3);
}

TEST_CASE("validate flags an incompatible topology") {
  const auto dir = fixtures::scratch_dir("cli_validate_topo");
  write_text(dir / "xor.json", kXor);
  auto cfg = xor_config();
  cfg["topology"] = json::parse(R"({"message_sizes": [2, 2], "encoder_inputs": [[0], [1]], "decoder_demands": [[0, 1]]})");
  const auto r = run(dir, "validate", cfg);
  CHECK(r.status == 1);
  CHECK(r.report["topology"]["valid"] == false);
}

TEST_CASE("reduce with an unattainable p exits 2") {
  const auto dir = fixtures::scratch_dir("cli_reduce_fail");
  auto net = json::parse(kXor);
  net["w"] = json::parse("[[[0.75, 0.25], [0.25, 0.75]], [[0.75, 0.25], [0.25, 0.75]]]");
  write_text(dir / "bsc.json", net.dump());
  auto cfg = xor_config();
  cfg["network"] = "bsc.json";
  cfg["scheme"] = {{"brute_force", {{"n", 2}}}};
  cfg["reduction"] = {{"delta", 0.5}, {"p", 0.01}};
  const auto r = run(dir, "reduce", cfg);
  CHECK(r.status == 2);
  CHECK(r.report["status"] == "runtime-failure");
  CHECK(r.report["error"]["kind"] == "NoQualifyingSequence");
  CHECK(r.report["error"]["best_candidate"] == json::array({0, 1}));
  CHECK(r.report["error"]["best_conditional_error"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("reduce writes a loadable causal scheme") {
  const auto dir = fixtures::scratch_dir("cli_reduce");
  write_text(dir / "xor.json", kXor);
  auto cfg = xor_config();
  cfg["scheme"] = {{"random_code", {{"n", 2}, {"seed", 3}}}};
  cfg["reduction"] = {{"delta", 0.5}, {"p", 0.2}, {"fallback", "seeded-uniform"}, {"seed", 8}};
  const auto r = run(dir, "reduce", cfg);
  REQUIRE(r.status == 0);
  CHECK(r.report["n_bar"] == 4);
  CHECK(r.report["causal_scheme"]["format"] == "table");
  const auto doc = io::read_json(dir / "out" / "causal_scheme.json");
  const auto net = io::network_file_from_json(json::parse(kXor));
  const auto topo = io::topology_from_json(json::parse(kSingleUser));
  const auto loaded = std::get<CausalScheme>(io::scheme_from_json(doc, topo, net.network));
  const auto reference = r.report["reference"].get<Sequence>();
  const auto direct = build_causal_scheme(random_code(topo, net.network, 2, 3), reference,
                                          ReductionConfig{0.5, 0.2, FallbackPolicy::SeededUniform, 8});
  CHECK(exact_error(loaded, net.network, net.process) == exact_error(direct, net.network, net.process));
}

TEST_CASE("reduce with a measured p") {
  const auto dir = fixtures::scratch_dir("cli_reduce_measured");
  auto net = json::parse(kXor);
  net["w"] = json::parse("[[[0.9, 0.1], [0.1, 0.9]], [[0.1, 0.9], [0.9, 0.1]]]");
  write_text(dir / "xor.json", net.dump());
  auto cfg = xor_config();
  cfg["scheme"] = {{"brute_force", {{"n", 2}}}};
  cfg["reduction"] = {{"delta", 0.5}, {"p", "measured"}};
  const auto r = run(dir, "reduce", cfg);
  CHECK(r.status == 0);
  CHECK(r.report["reduction"]["p"].get<double>() == doctest::Approx(0.1));

  // the noiseless XOR code has zero error, so "measured" cannot define p
  write_text(dir / "xor.json", kXor);
  const auto z = run(dir, "reduce", cfg);
  CHECK(z.status == 2);
  CHECK(z.report["error"]["kind"] == "PreconditionViolated");
}

TEST_CASE("simulate estimates the error of a scheme file") {
  const auto dir = fixtures::scratch_dir("cli_simulate");
  write_text(dir / "xor.json", kXor);
  auto cfg = xor_config();
  const json scheme = json::parse(R"({"kind": "noncausal", "n": 1,
    "encoders": [{"table": [[0], [0], [1], [1]]}],
    "decoders": [{"table": [0, 1, 0, 1]}]})");
  write_text(dir / "scheme.json", scheme.dump());
  cfg["scheme"] = {{"file", "scheme.json"}};
  auto r = run(dir, "simulate", cfg);
  CHECK(r.status == 0);
  // decoder ignores the state, so it errs exactly when s = 1
  CHECK(r.report["error_probability"]["value"] == 0.5);
  CHECK(r.report["error_probability"]["mode"] == "exact");

  cfg["evaluation"] = {{"mode", "monte-carlo"}, {"trials", 20000}, {"seed", 4}};
  r = run(dir, "simulate", cfg);
  CHECK(r.status == 0);
  CHECK(r.report["error_probability"]["mode"] == "monte-carlo");
  CHECK(r.report["error_probability"]["ci"]["lower"].get<double>() <= 0.5);
  CHECK(r.report["error_probability"]["ci"]["upper"].get<double>() >= 0.5);
}

TEST_CASE("configuration failures still produce a report") {
  const auto dir = fixtures::scratch_dir("cli_config_fail");
  auto cfg = xor_config();  // xor.json is never written
  auto r = run(dir, "verify", cfg);
  CHECK(r.status == 1);
  CHECK(r.report["error"]["kind"] == "ConfigError");

  write_text(dir / "xor.json", kXor);
  cfg["reduction"]["p"] = 1.5;
  r = run(dir, "verify", cfg);
  CHECK(r.status == 1);

  cfg = xor_config();
  cfg["evaluation"]["mode"] = "guess";
  r = run(dir, "simulate", cfg);
  CHECK(r.status == 1);

  cfg = xor_config();
  cfg["scheme"] = {{"brute_force", {{"n", 12}, {"budget", 1000}}}};
  r = run(dir, "verify", cfg);
  CHECK(r.status == 2);
  CHECK(r.report["error"]["kind"] == "InstanceTooLarge");
}

TEST_CASE("reports are identical across worker counts apart from the timestamp") {
  const auto dir = fixtures::scratch_dir("cli_determinism");
  write_text(dir / "xor.json", kXor);
  auto cfg = xor_config();
  cfg["scheme"] = {{"random_code", {{"n", 3}, {"seed", 5}}}};
  cfg["reduction"] = {{"delta", 1.0 / 3.0}, {"p", 0.3}};
  cfg["evaluation"] = {{"seed", 9}, {"cell_budget", 100}, {"trials", 20000}};
  auto a = run(dir, "verify", cfg, 1, std::nullopt, "a");
  auto b = run(dir, "verify", cfg, 6, std::nullopt, "b");
  REQUIRE(a.status == 0);
  REQUIRE(b.status == 0);
  CHECK(a.report["verification"]["mode"] != "exact");
  a.report.erase("generated_at");
  b.report.erase("generated_at");
  CHECK(a.report.dump() == b.report.dump());
  CHECK(read_text(dir / "a" / "summary.csv") == read_text(dir / "b" / "summary.csv"));
}

TEST_CASE("--seed overrides the configured seeds") {
  const auto dir = fixtures::scratch_dir("cli_seed");
  write_text(dir / "xor.json", kXor);
  const auto r = run(dir, "verify", xor_config(), 1, 42);
  CHECK(r.status == 0);
  CHECK(r.report["provenance"]["seeds"]["evaluation"] == 42);
  CHECK(r.report["provenance"]["seeds"]["reduction"] == 42);
  const auto plain = run(dir, "verify", xor_config(), 1, std::nullopt, "plain");
  CHECK(plain.report["provenance"]["config_hash"] != r.report["provenance"]["config_hash"]);
}

TEST_CASE("argv front end") {
  const auto dir = fixtures::scratch_dir("cli_argv");
  write_text(dir / "xor.json", kXor);
  write_text(dir / "cfg.json", xor_config().dump());
  const std::string cfg = (dir / "cfg.json").string(), out = (dir / "o").string();
  std::vector<std::string> args{"sdnet", "verify", "--config", cfg, "--workers", "2", "--out", out, "--seed", "7"};
  std::vector<char*> argv;
  for (auto& s : args) argv.push_back(s.data());
  CHECK(cli::main(static_cast<int>(argv.size()), argv.data()) == 0);
  CHECK(io::read_json(dir / "o" / "verification_report.json")["provenance"]["seeds"]["evaluation"] == 7);

  std::vector<std::string> bad{"sdnet", "verify", "--config", (dir / "missing.json").string()};
  std::vector<char*> bad_argv;
  for (auto& s : bad) bad_argv.push_back(s.data());
  CHECK(cli::main(static_cast<int>(bad_argv.size()), bad_argv.data()) != 0);
}

TEST_CASE("fnv1a") {
  CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
}
