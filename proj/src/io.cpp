#include "sdnet/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sdnet::io {
namespace {

template <class T>
T get_field(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object() || !doc.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

void flatten_tensor(const json& node, const std::vector<std::size_t>& dims, std::size_t depth, std::size_t leaf,
                    std::vector<double>& out, const std::string& path) {
  if (!node.is_array()) throw DimensionError("w" + path + " must be an array");
  if (depth == dims.size()) {
    if (node.size() != leaf)
      throw DimensionError("w" + path + " has " + std::to_string(node.size()) + " output probabilities, expected " +
                           std::to_string(leaf));
    for (const auto& v : node) {
      if (!v.is_number()) throw DimensionError("w" + path + " holds a non-number");
      out.push_back(v.get<double>());
    }
    return;
  }
  if (node.size() != dims[depth])
    throw DimensionError("w" + path + " has " + std::to_string(node.size()) + " entries, expected " +
                         std::to_string(dims[depth]));
  for (std::size_t i = 0; i < node.size(); ++i)
    flatten_tensor(node[i], dims, depth + 1, leaf, out, path + "[" + std::to_string(i) + "]");
}

json nest_tensor(const std::vector<double>& flat, const std::vector<std::size_t>& dims, std::size_t depth,
                 std::size_t leaf, std::size_t& pos) {
  json node = json::array();
  if (depth == dims.size()) {
    for (std::size_t y = 0; y < leaf; ++y) node.push_back(flat[pos++]);
    return node;
  }
  for (std::size_t i = 0; i < dims[depth]; ++i) node.push_back(nest_tensor(flat, dims, depth + 1, leaf, pos));
  return node;
}

json message_json(MessageIndex m) { return m == kDecodeFailure ? json(-1) : json(m); }

MessageIndex message_from_json(const json& v) {
  if (!v.is_number_integer()) throw ConfigError("decoder table entries must be integers");
  const auto x = v.get<std::int64_t>();
  if (x == -1) return kDecodeFailure;
  if (x < 0) throw SymbolRangeError("decoder table entry " + std::to_string(x) + " is negative");
  return static_cast<MessageIndex>(x);
}

std::vector<std::vector<MessageIndex>> decoders_from_json(const json& doc) {
  std::vector<std::vector<MessageIndex>> out;
  for (const auto& dec : get_field<json>(doc, "decoders", "scheme")) {
    auto& table = out.emplace_back();
    for (const auto& v : get_field<json>(dec, "table", "decoder")) table.push_back(message_from_json(v));
  }
  return out;
}

json decoders_to_json(const std::vector<std::vector<MessageIndex>>& decoders) {
  json out = json::array();
  for (const auto& table : decoders) {
    json t = json::array();
    for (auto m : table) t.push_back(message_json(m));
    out.push_back({{"table", std::move(t)}});
  }
  return out;
}

Symbol symbol_from_json(const json& v) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw SymbolRangeError("encoder table entries must be nonnegative integers");
  return static_cast<Symbol>(v.get<std::uint64_t>());
}

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

RawNetwork raw_network_from_json(const json& doc) {
  RawNetwork raw;
  auto& al = raw.alphabets;
  al.states = get_field<std::size_t>(doc, "state_alphabet", "network");
  al.inputs = get_field<std::vector<std::size_t>>(doc, "input_alphabets", "network");
  al.outputs = get_field<std::vector<std::size_t>>(doc, "output_alphabets", "network");
  if (doc.contains("k") && get_field<std::size_t>(doc, "k", "network") != al.inputs.size())
    throw DimensionError("network: k does not match the number of input alphabets");
  if (doc.contains("l") && get_field<std::size_t>(doc, "l", "network") != al.outputs.size())
    throw DimensionError("network: l does not match the number of output alphabets");
  for (auto sz : al.inputs)
    if (sz == 0) throw DimensionError("network: empty input alphabet");
  for (auto sz : al.outputs)
    if (sz == 0) throw DimensionError("network: empty output alphabet");

  std::vector<std::size_t> dims{al.states};
  dims.insert(dims.end(), al.inputs.begin(), al.inputs.end());
  flatten_tensor(get_field<json>(doc, "w", "network"), dims, 0, al.joint_outputs(), raw.w, "");
  return raw;
}

StateProcess state_process_from_json(const json& doc) {
  if (doc.contains("iid")) return StateProcess::iid(get_field<std::vector<double>>(doc, "iid", "state_process"));
  if (doc.contains("markov")) {
    const auto& mk = doc.at("markov");
    return StateProcess::markov(get_field<std::vector<double>>(mk, "initial", "markov"),
                                get_field<std::vector<std::vector<double>>>(mk, "transition", "markov"));
  }
  throw ConfigError("state_process must have an 'iid' or 'markov' entry");
}

json state_process_to_json(const StateProcess& process) {
  if (const auto* iid = std::get_if<IidStates>(&process.model())) return {{"iid", iid->pmf}};
  const auto& mk = std::get<MarkovStates>(process.model());
  return {{"markov", {{"initial", mk.initial}, {"transition", mk.transition}}}};
}

json network_to_json(const NetworkLaw& net, const StateProcess& process) {
  const auto& al = net.alphabets();
  std::vector<std::size_t> dims{al.states};
  dims.insert(dims.end(), al.inputs.begin(), al.inputs.end());
  std::size_t pos = 0;
  return {{"k", al.transmitters()},
          {"l", al.receivers()},
          {"state_alphabet", al.states},
          {"input_alphabets", al.inputs},
          {"output_alphabets", al.outputs},
          {"w", nest_tensor(net.tensor(), dims, 0, al.joint_outputs(), pos)},
          {"state_process", state_process_to_json(process)}};
}

NetworkFile network_file_from_json(const json& doc) {
  auto net = validate_network(raw_network_from_json(doc));
  auto process = state_process_from_json(get_field<json>(doc, "state_process", "network"));
  if (process.alphabet_size() != net.state_size())
    throw DimensionError("state_process covers " + std::to_string(process.alphabet_size()) +
                         " states, network declares " + std::to_string(net.state_size()));
  process.require_ergodic();
  return {std::move(net), std::move(process)};
}

// ---------------------------------------------------------------------------

MessageTopology topology_from_json(const json& doc) {
  return MessageTopology(get_field<std::vector<std::uint64_t>>(doc, "message_sizes", "topology"),
                         get_field<std::vector<std::vector<std::size_t>>>(doc, "encoder_inputs", "topology"),
                         get_field<std::vector<std::vector<std::size_t>>>(doc, "decoder_demands", "topology"));
}

json to_json(const MessageTopology& topology) {
  json enc = json::array(), dec = json::array();
  for (std::size_t a = 0; a < topology.transmitters(); ++a) enc.push_back(topology.encoder_inputs(a));
  for (std::size_t b = 0; b < topology.receivers(); ++b) dec.push_back(topology.decoder_demands(b));
  return {{"message_sizes", topology.message_sizes()}, {"encoder_inputs", enc}, {"decoder_demands", dec}};
}

// ---------------------------------------------------------------------------

json scheme_to_json(const NoncausalScheme& scheme, std::uint64_t cell_budget) {
  const auto t = tabulate(scheme, cell_budget);
  const std::size_t n = t.blocklength;
  json encoders = json::array();
  for (const auto& table : t.encoders) {
    json rows = json::array();
    for (std::size_t off = 0; off < table.size(); off += n)
      rows.push_back(std::vector<Symbol>(table.begin() + static_cast<std::ptrdiff_t>(off),
                                         table.begin() + static_cast<std::ptrdiff_t>(off + n)));
    encoders.push_back({{"table", std::move(rows)}});
  }
  return {{"kind", "noncausal"}, {"n", n}, {"encoders", encoders}, {"decoders", decoders_to_json(t.decoders)}};
}

json scheme_to_json(const CausalScheme& scheme, std::uint64_t cell_budget) {
  const auto t = tabulate(scheme, cell_budget);
  json encoders = json::array();
  for (const auto& per_time : t.encoders) encoders.push_back({{"tables", per_time}});
  return {{"kind", "causal"},
          {"n", t.blocklength},
          {"encoders", encoders},
          {"decoders", decoders_to_json(t.decoders)}};
}

AnyScheme scheme_from_json(const json& doc, const MessageTopology& topology, const NetworkLaw& net) {
  topology.check_compatible(net);
  if (doc.contains("rule")) {
    const auto& rule = doc.at("rule");
    if (rule.contains("random_code")) {
      const auto n = get_field<std::size_t>(doc, "n", "scheme");
      const auto& rc = rule.at("random_code");
      RandomCodeOptions opts;
      if (rc.contains("cell_budget")) opts.cell_budget = get_field<std::uint64_t>(rc, "cell_budget", "random_code");
      return random_code(topology, net, n, get_field<std::uint64_t>(rc, "seed", "random_code"), opts);
    }
    if (rule.contains("reduction")) {
      const auto& rd = rule.at("reduction");
      auto source = scheme_from_json(get_field<json>(rd, "source", "reduction"), topology, net);
      const auto* nc = std::get_if<NoncausalScheme>(&source);
      if (!nc) throw ConfigError("reduction source must be a noncausal scheme");
      ReductionConfig cfg;
      cfg.delta = get_field<double>(rd, "delta", "reduction");
      cfg.p = rd.contains("p") ? get_field<double>(rd, "p", "reduction") : 0.5;
      if (rd.contains("fallback")) cfg.fallback = fallback_from_name(get_field<std::string>(rd, "fallback", "reduction"));
      if (rd.contains("seed")) cfg.seed = get_field<std::uint64_t>(rd, "seed", "reduction");
      return build_causal_scheme(*nc, get_field<Sequence>(rd, "reference", "reduction"), cfg);
    }
    throw ConfigError("unknown scheme rule");
  }

  const auto kind = get_field<std::string>(doc, "kind", "scheme");
  const auto n = get_field<std::size_t>(doc, "n", "scheme");
  if (kind == "noncausal") {
    NoncausalTables t;
    t.blocklength = n;
    for (const auto& enc : get_field<json>(doc, "encoders", "scheme")) {
      auto& flat = t.encoders.emplace_back();
      for (const auto& codeword : get_field<json>(enc, "table", "encoder")) {
        if (!codeword.is_array() || codeword.size() != n)
          throw DimensionError("encoder codewords must have length " + std::to_string(n));
        for (const auto& x : codeword) flat.push_back(symbol_from_json(x));
      }
    }
    t.decoders = decoders_from_json(doc);
    return make_table_scheme(topology, net.alphabets(), std::move(t));
  }
  if (kind == "causal") {
    CausalTables t;
    t.blocklength = n;
    for (const auto& enc : get_field<json>(doc, "encoders", "scheme")) {
      auto& per_time = t.encoders.emplace_back();
      for (const auto& table : get_field<json>(enc, "tables", "encoder")) {
        auto& flat = per_time.emplace_back();
        for (const auto& x : table) flat.push_back(symbol_from_json(x));
      }
    }
    t.decoders = decoders_from_json(doc);
    return make_causal_table_scheme(topology, net.alphabets(), std::move(t));
  }
  throw ConfigError("scheme kind must be 'causal' or 'noncausal', got '" + kind + "'");
}

// ---------------------------------------------------------------------------

json to_json(const ErrorEstimate& e) {
  json out{{"value", e.value}, {"mode", to_string(e.mode)}};
  if (e.mode == EstimateMode::MonteCarlo) {
    out["trials"] = e.trials;
    out["events"] = e.events;
    out["seed"] = e.seed;
    if (e.ci) out["ci"] = {{"lower", e.ci->lower}, {"upper", e.ci->upper}, {"level", e.ci->level}};
  }
  return out;
}

json to_json(const VerificationReport& r) {
  json out{{"n", r.n},
           {"n_bar", r.n_bar},
           {"delta", r.delta},
           {"p", r.p},
           {"reference", r.reference},
           {"reference_type", r.reference_type},
           {"reference_exhaustive", r.reference_exhaustive},
           {"reference_candidates", r.reference_candidates},
           {"p_measured", to_json(r.p_measured)},
           {"p_precondition_holds", r.p_precondition_holds},
           {"conditional_error_at_reference", to_json(r.conditional_error_at_reference)},
           {"pr_A", to_json(r.pr_A)},
           {"causal_error", to_json(r.causal_error)},
           {"equality_residual", r.equality_residual},
           {"equality_holds", r.equality_holds},
           {"finite_bound_satisfied", r.finite_bound_satisfied},
           {"bound_3p_satisfied", r.bound_3p_satisfied},
           {"mode", r.mode}};
  out["causal_error_given_A"] = r.causal_error_given_A ? to_json(*r.causal_error_given_A) : json(nullptr);
  if (r.max_pointwise_residual) {
    out["max_pointwise_residual"] = *r.max_pointwise_residual;
    out["sequences_in_A"] = r.sequences_in_A;
  }
  return out;
}

std::string fallback_name(FallbackPolicy policy) {
  return policy == FallbackPolicy::Canonical ? "canonical" : "seeded-uniform";
}

FallbackPolicy fallback_from_name(const std::string& name) {
  if (name == "canonical") return FallbackPolicy::Canonical;
  if (name == "seeded-uniform") return FallbackPolicy::SeededUniform;
  throw ConfigError("fallback must be 'canonical' or 'seeded-uniform', got '" + name + "'");
}

std::string summary_csv_header() { return "n,n_bar,delta,p,pr_A,err_nc_cond,err_c,bound_3p,residual,mode\n"; }

std::string summary_csv_row(const VerificationReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%s,%.10g,%s\n", r.n, r.n_bar, r.delta, r.p,
                r.pr_A.value, r.conditional_error_at_reference.value, r.causal_error.value,
                r.bound_3p_satisfied ? "true" : "false", r.equality_residual, r.mode.c_str());
  return buf;
}

}  // namespace sdnet::io
