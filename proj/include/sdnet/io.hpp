#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "json.hpp"

#include "sdnet/network.hpp"
#include "sdnet/reduction.hpp"
#include "sdnet/scheme.hpp"
#include "sdnet/state_process.hpp"
#include "sdnet/topology.hpp"
#include "sdnet/verification.hpp"

namespace sdnet::io {

using json = nlohmann::json;

/// Reads a JSON document; parse failures become ConfigError.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& doc);

// --- network description -----------------------------------------------------
//
// {"k": 1, "l": 1, "state_alphabet": 2, "input_alphabets": [2], "output_alphabets": [2],
//  "w": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],            // [s][x_1]...[x_k] -> joint output PMF
//  "state_process": {"iid": [0.5, 0.5]}}                 // or {"markov": {"initial": [...], "transition": [[...]]}}

/// Shape problems throw DimensionError; probabilities are not checked here.
RawNetwork raw_network_from_json(const json& doc);
StateProcess state_process_from_json(const json& doc);
json network_to_json(const NetworkLaw& net, const StateProcess& process);
json state_process_to_json(const StateProcess& process);

struct NetworkFile {
  NetworkLaw network;
  StateProcess process;
};

/// Fully validated network and state process (irreducible, full-support marginal).
NetworkFile network_file_from_json(const json& doc);

// --- topology --------------------------------------------------------------------
// {"message_sizes": [2, 2], "encoder_inputs": [[0], [1]], "decoder_demands": [[0, 1]]}

MessageTopology topology_from_json(const json& doc);
json to_json(const MessageTopology& topology);

// --- schemes ---------------------------------------------------------------------

using AnyScheme = std::variant<NoncausalScheme, CausalScheme>;

/// Table form of a scheme (see NoncausalTables / CausalTables for the layout).
/// Decode failures are written as -1.
json scheme_to_json(const NoncausalScheme& scheme, std::uint64_t cell_budget);
json scheme_to_json(const CausalScheme& scheme, std::uint64_t cell_budget);

/// Accepts table form, {"rule": {"random_code": {"seed": s}}} with "n", and
/// {"rule": {"reduction": {"reference": [...], "delta": d, "fallback": ..., "seed": ..., "source": <scheme>}}}.
AnyScheme scheme_from_json(const json& doc, const MessageTopology& topology, const NetworkLaw& net);

// --- reports ---------------------------------------------------------------------

json to_json(const ErrorEstimate& estimate);
json to_json(const VerificationReport& report);

std::string fallback_name(FallbackPolicy policy);
FallbackPolicy fallback_from_name(const std::string& name);

/// CSV summary (n, n_bar, delta, p, pr_A, err_nc_cond, err_c, bound_3p, residual, mode).
std::string summary_csv_header();
std::string summary_csv_row(const VerificationReport& report);

}  // namespace sdnet::io
