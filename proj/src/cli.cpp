#include "sdnet/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sdnet/codes.hpp"
#include "sdnet/verification.hpp"

namespace sdnet::cli {

using io::json;
namespace fs = std::filesystem;

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

EvalMode eval_mode_from_name(const std::string& name) {
  if (name == "auto") return EvalMode::Auto;
  if (name == "exact") return EvalMode::Exact;
  if (name == "monte-carlo" || name == "mc") return EvalMode::MonteCarlo;
  throw ConfigError("evaluation.mode must be 'auto', 'exact' or 'monte-carlo', got '" + name + "'");
}

template <class T>
T value_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

struct Experiment {
  json config;          // effective configuration (after --seed)
  fs::path base_dir;    // relative paths resolve against the config file
  json network_doc;
  std::optional<io::NetworkFile> network;
  std::optional<MessageTopology> topology;
  std::optional<io::AnyScheme> scheme;
  json scheme_source;  // the scheme as JSON, for re-emitting
  EvaluationOptions eval;
  ReductionConfig reduction;
  bool p_measured = false;
  std::string eval_mode_name = "auto";
};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

json load_config(const Invocation& inv) {
  json cfg = io::read_json(inv.config);
  if (!cfg.is_object()) throw ConfigError("configuration must be a JSON object");
  if (inv.seed) {
    cfg["evaluation"]["seed"] = *inv.seed;
    cfg["reduction"]["seed"] = *inv.seed;
  }
  return cfg;
}

void load_parameters(Experiment& ex) {
  const auto& cfg = ex.config;
  const json ev = cfg.value("evaluation", json::object());
  ex.eval_mode_name = value_or<std::string>(ev, "mode", "auto", "evaluation");
  ex.eval.mode = eval_mode_from_name(ex.eval_mode_name);
  ex.eval.trials = value_or<std::uint64_t>(ev, "trials", ex.eval.trials, "evaluation");
  ex.eval.seed = value_or<std::uint64_t>(ev, "seed", ex.eval.seed, "evaluation");
  ex.eval.cell_budget = value_or<std::uint64_t>(ev, "cell_budget", ex.eval.cell_budget, "evaluation");
  ex.eval.confidence = value_or<double>(ev, "confidence", ex.eval.confidence, "evaluation");
  if (ex.eval.trials == 0) throw ConfigError("evaluation.trials must be positive");
  if (!(ex.eval.confidence > 0.0 && ex.eval.confidence < 1.0))
    throw ConfigError("evaluation.confidence must lie strictly between 0 and 1");

  if (cfg.contains("reduction")) {
    const json& rd = cfg.at("reduction");
    ex.reduction.delta = value_or<double>(rd, "delta", ex.reduction.delta, "reduction");
    if (rd.contains("p") && rd.at("p").is_string()) {
      if (rd.at("p").get<std::string>() != "measured") throw ConfigError("reduction.p must be a number or \"measured\"");
      ex.p_measured = true;
    } else {
      ex.reduction.p = value_or<double>(rd, "p", ex.reduction.p, "reduction");
    }
    ex.reduction.fallback = io::fallback_from_name(value_or<std::string>(rd, "fallback", "canonical", "reduction"));
    ex.reduction.seed = value_or<std::uint64_t>(rd, "seed", ex.reduction.seed, "reduction");
    if (!(ex.reduction.delta > 0.0)) throw ConfigError("reduction.delta must be positive");
    if (!ex.p_measured && !(ex.reduction.p > 0.0 && ex.reduction.p < 1.0))
      throw ConfigError("reduction.p must lie strictly between 0 and 1");
  }
}

json load_network_doc(const Experiment& ex) {
  if (!ex.config.contains("network")) throw ConfigError("configuration has no 'network' entry");
  const json& n = ex.config.at("network");
  if (n.is_string()) return io::read_json(resolve(ex.base_dir, n.get<std::string>()));
  if (n.is_object()) return n;
  throw ConfigError("'network' must be a path or an inline object");
}

void load_scheme(Experiment& ex) {
  if (!ex.config.contains("scheme")) throw ConfigError("configuration has no 'scheme' entry");
  const json& sc = ex.config.at("scheme");
  const auto& net = ex.network->network;
  if (sc.contains("file")) {
    ex.scheme_source = io::read_json(resolve(ex.base_dir, sc.at("file").get<std::string>()));
  } else if (sc.contains("inline")) {
    ex.scheme_source = sc.at("inline");
  } else if (sc.contains("random_code")) {
    const json& rc = sc.at("random_code");
    ex.scheme_source = {{"n", value_or<std::size_t>(rc, "n", 0, "scheme.random_code")},
                        {"rule", {{"random_code", {{"seed", value_or<std::uint64_t>(rc, "seed", 0, "scheme.random_code")}}}}}};
    if (ex.scheme_source["n"] == 0) throw ConfigError("scheme.random_code.n must be positive");
    if (rc.contains("cell_budget")) ex.scheme_source["rule"]["random_code"]["cell_budget"] = rc.at("cell_budget");
  } else if (sc.contains("brute_force")) {
    const json& bf = sc.at("brute_force");
    const auto n = value_or<std::size_t>(bf, "n", 0, "scheme.brute_force");
    if (n == 0) throw ConfigError("scheme.brute_force.n must be positive");
    const auto budget = value_or<std::uint64_t>(bf, "budget", kDefaultCellBudget, "scheme.brute_force");
    auto scheme = brute_force_optimal(*ex.topology, net, ex.network->process, n, budget);
    ex.scheme_source = io::scheme_to_json(scheme, budget);
    ex.scheme = std::move(scheme);
    return;
  } else {
    throw ConfigError("scheme must name one of 'file', 'inline', 'random_code' or 'brute_force'");
  }
  ex.scheme = io::scheme_from_json(ex.scheme_source, *ex.topology, net);
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"kind", kind}, {"message", message}};
}

json violation_json(const Violation& v) {
  const char* kind = v.kind == Violation::Kind::NonNormalizedSlice ? "NonNormalizedSlice"
                     : v.kind == Violation::Kind::NegativeEntry    ? "NegativeEntry"
                                                                   : "SizeMismatch";
  json out{{"kind", kind}, {"message", v.message}};
  if (v.kind != Violation::Kind::SizeMismatch) {
    out["slice"] = v.slice;
    out["sum"] = v.sum;
  }
  return out;
}

std::size_t scheme_blocklength(const io::AnyScheme& s) {
  return std::visit([](const auto& x) { return x.blocklength(); }, s);
}

const NoncausalScheme& require_noncausal(const Experiment& ex) {
  const auto* nc = std::get_if<NoncausalScheme>(&*ex.scheme);
  if (!nc) throw ConfigError("this command needs a noncausal scheme");
  return *nc;
}

json rates_json(const MessageTopology& topo, std::size_t n) {
  json r = json::array();
  for (std::size_t sigma = 0; sigma < topo.message_count(); ++sigma) r.push_back(topo.rate(sigma, n));
  return r;
}

void resolve_p(Experiment& ex, const Evaluator& ev, json& report) {
  if (!ex.p_measured) return;
  const auto measured = ev.overall_error(require_noncausal(ex), ex.network->process, 1);
  report["p_measured_for_config"] = io::to_json(measured);
  if (!(measured.value > 0.0))
    throw PreconditionViolated("reduction.p = \"measured\" but the scheme has zero measured error");
  ex.reduction.p = measured.value;
}

// --- subcommands ------------------------------------------------------------------

int cmd_validate(Experiment& ex, json& report, std::ostream& diag) {
  bool ok = true;
  RawNetwork raw;
  try {
    raw = io::raw_network_from_json(ex.network_doc);
  } catch (const Error& e) {
    report["network"] = {{"valid", false}, {"violations", json::array({error_json(e.kind(), e.what())})}};
    diag << "network: " << e.what() << '\n';
    return kValidationFailure;
  }
  const auto problems = check_network(raw);
  json vs = json::array();
  for (const auto& v : problems) {
    vs.push_back(violation_json(v));
    diag << "network: " << v.message << '\n';
  }
  report["network"] = {{"valid", problems.empty()}, {"violations", vs}};
  if (!problems.empty()) return kValidationFailure;

  try {
    ex.network = io::network_file_from_json(ex.network_doc);
    report["state_process"] = {{"valid", true}, {"marginal", ex.network->process.marginal()}};
  } catch (const Error& e) {
    report["state_process"] = {{"valid", false}, {"error", error_json(e.kind(), e.what())}};
    diag << "state process: " << e.what() << '\n';
    return kValidationFailure;
  }

  if (ex.config.contains("topology")) {
    try {
      ex.topology = io::topology_from_json(ex.config.at("topology"));
      ex.topology->check_compatible(ex.network->network);
      report["topology"] = {{"valid", true}};
    } catch (const Error& e) {
      report["topology"] = {{"valid", false}, {"error", error_json(e.kind(), e.what())}};
      diag << "topology: " << e.what() << '\n';
      ok = false;
    }
  }
  if (ok && ex.topology && ex.config.contains("scheme")) {
    try {
      load_scheme(ex);
      const bool causal = std::holds_alternative<CausalScheme>(*ex.scheme);
      report["scheme"] = {{"valid", true},
                          {"kind", causal ? "causal" : "noncausal"},
                          {"n", scheme_blocklength(*ex.scheme)}};
    } catch (const InstanceTooLarge&) {
      throw;
    } catch (const Error& e) {
      report["scheme"] = {{"valid", false}, {"error", error_json(e.kind(), e.what())}};
      diag << "scheme: " << e.what() << '\n';
      ok = false;
    }
  }
  return ok ? kSuccess : kValidationFailure;
}

void load_all(Experiment& ex) {
  ex.network = io::network_file_from_json(ex.network_doc);
  if (!ex.config.contains("topology")) throw ConfigError("configuration has no 'topology' entry");
  ex.topology = io::topology_from_json(ex.config.at("topology"));
  ex.topology->check_compatible(ex.network->network);
  load_scheme(ex);
}

int cmd_simulate(Experiment& ex, json& report) {
  const Evaluator ev(ex.network->network, ex.eval);
  const auto est = std::visit([&](const auto& s) { return ev.overall_error(s, ex.network->process); }, *ex.scheme);
  const std::size_t n = scheme_blocklength(*ex.scheme);
  report["scheme"] = {{"kind", std::holds_alternative<CausalScheme>(*ex.scheme) ? "causal" : "noncausal"},
                      {"n", n},
                      {"rates", rates_json(*ex.topology, n)}};
  report["error_probability"] = io::to_json(est);
  return kSuccess;
}

int cmd_reduce(Experiment& ex, json& report, const fs::path& out_dir) {
  const auto& nc = require_noncausal(ex);
  const Evaluator ev(ex.network->network, ex.eval);
  resolve_p(ex, ev, report);
  ex.reduction.validate();
  report["reduction"] = {{"delta", ex.reduction.delta},
                         {"p", ex.reduction.p},
                         {"fallback", io::fallback_name(ex.reduction.fallback)},
                         {"seed", ex.reduction.seed}};

  const auto sel = select_reference_sequence(nc, ex.network->process, ex.reduction.delta, ex.reduction.p, ev,
                                             SelectionOptions{ex.eval.cell_budget, 4096, ex.eval.seed});
  const auto causal = build_causal_scheme(nc, sel.sequence, ex.reduction);

  json scheme_doc;
  std::string format = "table";
  try {
    scheme_doc = io::scheme_to_json(causal, ex.eval.cell_budget);
  } catch (const InstanceTooLarge&) {
    format = "rule";
    scheme_doc = {{"kind", "causal"},
                  {"n", causal.blocklength()},
                  {"rule",
                   {{"reduction",
                     {{"reference", sel.sequence},
                      {"delta", ex.reduction.delta},
                      {"p", ex.reduction.p},
                      {"fallback", io::fallback_name(ex.reduction.fallback)},
                      {"seed", ex.reduction.seed},
                      {"source", ex.scheme_source}}}}}};
  }
  io::write_json(out_dir / "causal_scheme.json", scheme_doc);

  report["n"] = nc.blocklength();
  report["n_bar"] = causal.blocklength();
  report["reference"] = sel.sequence;
  report["reference_type"] = empirical_counts(sel.sequence, ex.network->network.state_size()).type();
  report["reference_exhaustive"] = sel.exhaustive;
  report["reference_candidates"] = sel.candidates_examined;
  report["conditional_error_at_reference"] = io::to_json(sel.conditional_error);
  report["causal_scheme"] = {{"file", "causal_scheme.json"}, {"format", format}};
  return kSuccess;
}

int cmd_verify(Experiment& ex, json& report, const fs::path& out_dir) {
  const auto& nc = require_noncausal(ex);
  const Evaluator ev(ex.network->network, ex.eval);
  resolve_p(ex, ev, report);
  const auto r = verify_reduction(nc, ex.network->network, ex.network->process, ex.reduction, ex.eval);
  report["fallback"] = io::fallback_name(ex.reduction.fallback);
  report["verification"] = io::to_json(r);
  std::ofstream csv(out_dir / "summary.csv");
  csv << io::summary_csv_header() << io::summary_csv_row(r);
  return kSuccess;
}

std::string report_name(const std::string& command) {
  if (command == "validate") return "validation_report.json";
  if (command == "simulate") return "simulation_report.json";
  if (command == "reduce") return "reduction_report.json";
  return "verification_report.json";
}

}  // namespace

int run(const Invocation& inv, std::ostream& diag) {
  if (inv.command != "validate" && inv.command != "simulate" && inv.command != "reduce" && inv.command != "verify") {
    diag << "unknown command '" << inv.command << "'\n";
    return kValidationFailure;
  }

  Experiment ex;
  ex.base_dir = inv.config.has_parent_path() ? inv.config.parent_path() : fs::path(".");
  json report{{"command", inv.command}, {"generated_at", timestamp_utc()}};
  fs::path out_dir = inv.out.value_or("out");
  int status = kSuccess;
  std::string stage = "config";

  try {
    ex.config = load_config(inv);
    if (!inv.out && ex.config.contains("output")) {
      const json& o = ex.config.at("output");
      if (o.is_string()) out_dir = resolve(ex.base_dir, o.get<std::string>());
      else if (o.is_object() && o.contains("dir")) out_dir = resolve(ex.base_dir, o.at("dir").get<std::string>());
    }
    fs::create_directories(out_dir);

    json hashed = ex.config;
    hashed.erase("output");
    load_parameters(ex);
    ex.eval.workers = inv.workers;
    ex.network_doc = load_network_doc(ex);
    report["provenance"] = {{"config_hash", fnv1a_hex(hashed.dump())},
                            {"network_hash", fnv1a_hex(ex.network_doc.dump())},
                            {"seeds",
                             {{"evaluation", ex.eval.seed},
                              {"reduction", ex.reduction.seed},
                              {"scheme", ex.config.contains("scheme") && ex.config["scheme"].contains("random_code")
                                             ? ex.config["scheme"]["random_code"].value("seed", json(0))
                                             : json(nullptr)}}},
                            {"mode", ex.eval_mode_name},
                            {"trials", ex.eval.trials},
                            {"cell_budget", ex.eval.cell_budget}};

    if (inv.command == "validate") {
      stage = "validate";
      status = cmd_validate(ex, report, diag);
    } else {
      load_all(ex);
      stage = "run";
      if (inv.command == "simulate") status = cmd_simulate(ex, report);
      else if (inv.command == "reduce") status = cmd_reduce(ex, report, out_dir);
      else status = cmd_verify(ex, report, out_dir);
    }
  } catch (const NoQualifyingSequence& e) {
    status = kRuntimeFailure;
    json err = error_json(e.kind(), e.what());
    err["best_candidate"] = e.best_candidate() ? json(*e.best_candidate()) : json(nullptr);
    err["best_conditional_error"] = e.best_conditional_error() ? json(*e.best_conditional_error()) : json(nullptr);
    report["error"] = err;
  } catch (const InstanceTooLarge& e) {
    status = kRuntimeFailure;
    report["error"] = error_json(e.kind(), e.what());
  } catch (const Error& e) {
    status = stage == "run" ? kRuntimeFailure : kValidationFailure;
    report["error"] = error_json(e.kind(), e.what());
  } catch (const json::exception& e) {
    status = stage == "run" ? kRuntimeFailure : kValidationFailure;
    report["error"] = error_json("ConfigError", e.what());
  } catch (const std::exception& e) {
    status = kRuntimeFailure;
    report["error"] = error_json("InternalError", e.what());
  }

  report["exit_status"] = status;
  report["status"] = status == kSuccess ? "ok" : status == kValidationFailure ? "validation-failure" : "runtime-failure";
  if (report.contains("error")) diag << report["error"]["kind"].get<std::string>() << ": "
                                     << report["error"]["message"].get<std::string>() << '\n';
  try {
    io::write_json(out_dir / report_name(inv.command), report);
  } catch (const std::exception& e) {
    diag << "cannot write report: " << e.what() << '\n';
    if (status == kSuccess) status = kRuntimeFailure;
  }
  return status;
}

int main(int argc, char** argv) {
  CLI::App app{"State-dependent network coding toolkit"};
  app.require_subcommand(1);
  Invocation inv;
  std::string out;
  std::uint64_t seed = 0;

  for (const auto& [name, help] : std::initializer_list<std::pair<const char*, const char*>>{
           {"validate", "check a network, topology and scheme"},
           {"simulate", "estimate the error probability of a scheme"},
           {"reduce", "build the causal scheme from a noncausal one"},
           {"verify", "build the causal scheme and check its error decomposition"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config, "experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--workers", inv.workers, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "overrides evaluation and reduction seeds");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kValidationFailure;
  }
  auto* sub = app.get_subcommands().front();
  inv.command = sub->get_name();
  if (!out.empty()) inv.out = out;
  if (sub->count("--seed")) inv.seed = seed;
  return run(inv, std::cerr);
}

}  // namespace sdnet::cli
