// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>
#include <string>

#include "../support/fixtures.hpp"
#include "sdnet/cli.hpp"
#include "sdnet/verification.hpp"

using namespace sdnet;
using io::json;

namespace {

constexpr double kExactTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool on_time = time_limit_s <= 0 || secs < time_limit_s;
  const bool pass = r.pass && on_time;
  if (!pass) ++failures;
  std::printf("%s  %d %-28s %7.2fs  %s%s\n", pass ? "PASS" : "FAIL", id, name, secs, r.detail.c_str(),
              on_time ? "" : "  [over time limit]");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Sequence random_sequence(Rng& rng, std::size_t len, std::size_t m) {
  Sequence s(len);
  for (auto& v : s) v = static_cast<Symbol>(uniform_below(rng, m));
  return s;
}

// Greedy kappa written out directly.
std::vector<std::size_t> oracle_kappa(const Sequence& ref, const Sequence& s) {
  std::vector<std::size_t> k(s.size(), 0);
  std::vector<bool> used(ref.size(), false);
  for (std::size_t t = 0; t < s.size(); ++t)
    for (std::size_t i = 0; i < ref.size(); ++i)
      if (!used[i] && ref[i] == s[t]) {
        used[i] = true;
        k[t] = i + 1;
        break;
      }
  return k;
}

// Pr{A^c} for IID uniform binary states and a balanced reference: N0 ~ Bin(nbar, 1/2)
// must lie in [n/2, nbar - n/2].
double binomial_miss(std::size_t n, std::size_t nbar) {
  double inside = 0.0;
  for (std::size_t k = n / 2; k + n / 2 <= nbar; ++k)
    inside += std::exp(std::lgamma(nbar + 1.0) - std::lgamma(k + 1.0) - std::lgamma(nbar - k + 1.0) -
                       nbar * std::log(2.0));
  return 1.0 - inside;
}

// Pointwise equality check of Pr_c{E | s^nbar} against Pr_nc{E | s~} on all of A.
struct EqualityScan {
  std::size_t in_A = 0;
  double max_residual = 0.0;
};

EqualityScan scan_equality(const NoncausalScheme& nc, const NetworkLaw& net, const Sequence& ref,
                           const ReductionConfig& cfg) {
  const auto causal = build_causal_scheme(nc, ref, cfg);
  const double target = fixtures::oracle_error_given_states(nc, net, ref);
  EqualityScan out;
  Sequence s(causal.blocklength(), 0);
  do {
    if (!event_A_holds(s, ref)) continue;
    ++out.in_A;
    const double got = exact_error_given_states(causal, net, s);
    const double oracle = fixtures::oracle_error_given_states(causal, net, s);
    out.max_residual = std::max({out.max_residual, std::abs(got - target), std::abs(oracle - target)});
  } while (next_sequence(s, net.state_size()));
  return out;
}

std::string read_without_timestamp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  static const std::regex stamp(R"(\n\s*"generated_at": "[^"]*",?)");
  return std::regex_replace(ss.str(), stamp, "");
}

}  // namespace

int main() {
  std::printf("acceptance suite (tolerance %.0e on exact comparisons)\n", kExactTol);

  criterion(1, "conditional equality", 10, [] {
    const auto net = fixtures::xor_single();
    const auto process = fixtures::uniform_iid();
    const auto topo = fixtures::single_user(2);
    const ReductionConfig cfg{1.0 / 3.0, 0.1};
    const auto nc = brute_force_optimal(topo, net, process, 3);
    const Evaluator ev(net, EvaluationOptions{});
    const auto sel = select_reference_sequence(nc, process, cfg.delta, cfg.p, ev);
    const auto main_scan = scan_equality(nc, net, sel.sequence, cfg);
    bool ok = inflated_blocklength(3, cfg.delta) == 5 && main_scan.max_residual <= kExactTol && main_scan.in_A > 0;

    // Same identity on noisy random codes, arbitrary references and both fallbacks.
    std::size_t extra = 0;
    double extra_residual = 0.0;
    const auto noisy = fixtures::bsc_with_state(0.1);
    Rng rng = make_rng(101);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto code = random_code(fixtures::single_user(3), noisy, 3, seed);
      const auto ref = random_sequence(rng, 3, 2);
      const ReductionConfig c{1.0 / 3.0, 0.1, seed % 2 ? FallbackPolicy::SeededUniform : FallbackPolicy::Canonical,
                              seed};
      const auto scan = scan_equality(code, noisy, ref, c);
      extra += scan.in_A;
      extra_residual = std::max(extra_residual, scan.max_residual);
    }
    ok = ok && extra_residual <= kExactTol;
    return Outcome{ok, fmt("n_bar=5 ref=(%u,%u,%u) |A|=%zu max_residual=%.3g; 6 random codes |A|=%zu max_residual=%.3g",
                           sel.sequence[0], sel.sequence[1], sel.sequence[2], main_scan.in_A, main_scan.max_residual,
                           extra, extra_residual)};
  });

  criterion(2, "finite-n bound", 10, [] {
    const auto net = fixtures::bsc_with_state(0.25);
    const auto process = fixtures::uniform_iid();
    const auto nc = brute_force_optimal(fixtures::single_user(2), net, process, 2);
    const ReductionConfig cfg{0.5, 0.25};
    EvaluationOptions opts;
    opts.mode = EvalMode::Exact;
    const auto r = verify_reduction(nc, net, process, cfg, opts);
    // Independent recomputation of each term.
    const auto causal = build_causal_scheme(nc, r.reference, cfg);
    const double pc = fixtures::oracle_error(causal, net, process);
    const double cond = fixtures::oracle_error_given_states(nc, net, r.reference);
    double pr_a = 0.0;
    Sequence s(causal.blocklength(), 0);
    do {
      if (event_A_holds(s, r.reference)) pr_a += process.probability(s);
    } while (next_sequence(s, 2));
    const bool agree = std::abs(pc - r.causal_error.value) <= kExactTol &&
                       std::abs(cond - r.conditional_error_at_reference.value) <= kExactTol &&
                       std::abs(pr_a - r.pr_A.value) <= kExactTol;
    const bool bound = pc <= cond + (1.0 - pr_a) + kExactTol;
    return Outcome{agree && bound && r.finite_bound_satisfied && r.mode == "exact",
                   fmt("Pr_c{E}=%.6g <= %.6g + %.6g; 3p form (%.6g <= %.2g) %s", pc, cond, 1.0 - pr_a, pc, 3 * cfg.p,
                       r.bound_3p_satisfied ? "holds" : "does not hold")};
  });

  criterion(3, "matching equivalence", 5, [] {
    Rng rng = make_rng(3);
    std::size_t violations = 0, in_A = 0;
    const int pairs = 10000;
    for (int trial = 0; trial < pairs; ++trial) {
      const std::size_t m = 1 + uniform_below(rng, 4);
      const auto ref = random_sequence(rng, uniform_below(rng, 16), m);
      const auto s = random_sequence(rng, uniform_below(rng, 24), m);
      const auto r = kappa_match(ref, s);
      if (r.kappa != oracle_kappa(ref, s)) ++violations;
      const auto g = group_mapping(ref, m);
      std::vector<std::size_t> seen(m, 0);
      std::vector<bool> hit(ref.size() + 1, false);
      for (std::size_t t = 0; t < s.size(); ++t) {
        if (r.kappa[t] != g.inverse(s[t], ++seen[s[t]])) ++violations;
        if (r.kappa[t]) {
          if (hit[r.kappa[t]]) ++violations;
          hit[r.kappa[t]] = true;
        }
      }
      const bool a = event_A_holds(s, ref);
      in_A += a;
      if (a != r.nofail_holds || a != r.complete) ++violations;
    }
    return Outcome{violations == 0, fmt("%d pairs, %zu in A, %zu violations", pairs, in_A, violations)};
  });

  criterion(4, "Pr{A^c} trend", 30, [] {
    const auto process = fixtures::uniform_iid();
    const double delta = 0.1;
    const std::size_t samples = 10000, seeds = 11;
    std::vector<double> medians;
    std::string detail;
    for (std::size_t n : {50, 100, 200}) {
      Sequence ref(n, 0);
      std::fill(ref.begin() + n / 2, ref.end(), 1);
      if (!is_delta_typical(ref, process.marginal(), delta)) return Outcome{false, "balanced reference not typical"};
      const std::size_t nbar = inflated_blocklength(n, delta);
      std::vector<double> miss;
      for (std::size_t seed = 0; seed < seeds; ++seed) {
        std::size_t fails = 0;
        for (std::size_t t = 0; t < samples; ++t) {
          Rng rng = make_rng(400 + seed, t);
          fails += !event_A_holds(process.sample(nbar, rng), ref);
        }
        miss.push_back(static_cast<double>(fails) / samples);
      }
      std::nth_element(miss.begin(), miss.begin() + seeds / 2, miss.end());
      medians.push_back(miss[seeds / 2]);
      detail += fmt("n=%zu: %.4f (binomial %.4f)  ", n, medians.back(), binomial_miss(n, nbar));
    }
    const bool ok = medians[0] > medians[1] && medians[1] > medians[2] && medians[2] < 0.05;
    return Outcome{ok, detail};
  });

  criterion(5, "typicality of Markov states", 30, [] {
    const auto chain = StateProcess::markov({1.0, 0.0}, {{0.9, 0.1}, {0.2, 0.8}});
    const auto pi = chain.marginal();
    // pi T = pi for this chain: 0.1 pi0 = 0.2 pi1
    const bool stationary = std::abs(pi[0] - 2.0 / 3.0) <= 1e-12 && std::abs(pi[1] - 1.0 / 3.0) <= 1e-12;
    std::size_t typical = 0;
    const std::size_t runs = 200;
    for (std::size_t seed = 0; seed < runs; ++seed) {
      Rng rng = make_rng(seed);
      typical += is_delta_typical(chain.sample(10000, rng), std::vector<double>{2.0 / 3.0, 1.0 / 3.0}, 0.1);
    }
    const double frac = static_cast<double>(typical) / runs;
    return Outcome{stationary && frac > 0.95, fmt("stationary (%.6f, %.6f), typical fraction %.3f", pi[0], pi[1], frac)};
  });

  criterion(6, "estimator consistency", 60, [] {
    struct Instance {
      std::string name;
      std::function<ErrorEstimate(const McOptions&)> mc;
      std::function<double()> exact;
    };
    std::vector<Instance> suite;
    const auto add = [&](std::string name, auto scheme, NetworkLaw net, StateProcess process) {
      suite.push_back({std::move(name),
                       [=](const McOptions& o) { return mc_error(scheme, net, process, o); },
                       [=] { return exact_error(scheme, net, process); }});
    };
    const auto iid = fixtures::uniform_iid();
    const auto markov = StateProcess::markov({0.5, 0.5}, {{0.9, 0.1}, {0.2, 0.8}});
    add("bsc(0.2) M=3 n=3", random_code(fixtures::single_user(3), fixtures::bsc(0.2), 3, 11),
        fixtures::bsc(0.2), iid);
    add("bsc-with-state(0.1) markov", random_code(fixtures::single_user(4), fixtures::bsc_with_state(0.1), 3, 12),
        fixtures::bsc_with_state(0.1), markov);
    add("xor MAC(0.1)", random_code(fixtures::mac(2, 2), fixtures::xor_mac(0.1), 2, 13), fixtures::xor_mac(0.1), iid);
    add("broadcast(0.1,0.2)", random_code(fixtures::broadcast_private(2, 2), fixtures::broadcast(0.1, 0.2), 2, 14),
        fixtures::broadcast(0.1, 0.2), markov);
    {
      const auto nc = brute_force_optimal(fixtures::single_user(2), fixtures::bsc_with_state(0.25), iid, 2);
      add("reduced causal n_bar=4",
          build_causal_scheme(nc, Sequence{0, 1}, ReductionConfig{0.5, 0.25, FallbackPolicy::SeededUniform, 5}),
          fixtures::bsc_with_state(0.25), iid);
    }
    {
      Rng rng = make_rng(15);
      const auto mac = fixtures::xor_mac(0.05);
      add("random causal MAC", fixtures::random_causal_tables(fixtures::mac(2, 2), mac.alphabets(), 2, rng), mac,
          markov);
    }
    std::size_t inside = 0;
    std::string detail;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      McOptions o;
      o.trials = 100000;
      o.seed = 600 + i;
      o.workers = 4;
      const auto est = suite[i].mc(o);
      const double exact = suite[i].exact();
      const bool ok = est.lower() <= exact && exact <= est.upper();
      inside += ok;
      if (!ok) detail += fmt("[%s: exact %.5f outside [%.5f, %.5f]] ", suite[i].name.c_str(), exact, est.lower(), est.upper());
    }
    detail = fmt("%zu/%zu instances inside the 99%% interval ", inside, suite.size()) + detail;
    return Outcome{inside == suite.size() && suite.size() >= 5, detail};
  });

  criterion(7, "lift identity", 10, [] {
    Rng rng = make_rng(7);
    std::mt19937_64 table_rng(77);
    std::size_t mismatches = 0;
    const int schemes = 100;
    for (int i = 0; i < schemes; ++i) {
      NetworkLaw net = fixtures::bsc_with_state(0.1 + 0.05 * (i % 5));
      MessageTopology topo = fixtures::single_user(2 + i % 3);
      switch (i % 3) {
        case 1:
          net = fixtures::xor_mac(0.1);
          topo = fixtures::mac(2, 1 + i % 2);
          break;
        case 2:
          net = fixtures::broadcast(0.1, 0.3);
          topo = fixtures::broadcast_private(2, 2);
          break;
      }
      const std::size_t n = 1 + uniform_below(rng, 3);
      const double q = 0.1 + 0.8 * uniform01(rng);
      const auto process = i % 2 ? StateProcess::iid({q, 1 - q}) : StateProcess::markov({q, 1 - q}, {{q, 1 - q}, {0.5, 0.5}});
      const auto c = fixtures::random_causal_tables(topo, net.alphabets(), n, table_rng);
      if (exact_error(lift_causal(c), net, process) != exact_error(c, net, process)) ++mismatches;
    }
    return Outcome{mismatches == 0, fmt("%d schemes, %zu mismatches (bitwise comparison)", schemes, mismatches)};
  });

  criterion(8, "determinism", 0, [] {
    const auto dir = fixtures::scratch_dir("acceptance_determinism");
    std::ofstream(dir / "xor.json") << io::network_to_json(fixtures::xor_mac(0.1), fixtures::uniform_iid()).dump();
    const json cfg = {
        {"network", "xor.json"},
        {"topology", io::to_json(fixtures::mac(2, 2))},
        {"scheme", {{"random_code", {{"n", 3}, {"seed", 21}}}}},
        {"reduction", {{"delta", 1.0 / 3.0}, {"p", 0.45}, {"fallback", "seeded-uniform"}, {"seed", 3}}},
        // small budget so part of the verification runs by Monte Carlo
        {"evaluation", {{"seed", 8}, {"trials", 20000}, {"cell_budget", 2000}}}};
    std::ofstream(dir / "config.json") << cfg.dump(2);
    std::vector<std::string> reports, csvs;
    std::string mode;
    for (unsigned workers : {1u, 8u, 1u, 3u, 8u}) {
      const auto out = dir / ("w" + std::to_string(workers) + "_" + std::to_string(reports.size()));
      std::ostringstream diag;
      const int status = cli::run(cli::Invocation{"verify", dir / "config.json", workers, out, std::nullopt}, diag);
      if (status != 0) return Outcome{false, "verify exited " + std::to_string(status) + ": " + diag.str()};
      reports.push_back(read_without_timestamp(out / "verification_report.json"));
      csvs.push_back(read_without_timestamp(out / "summary.csv"));
      mode = io::read_json(out / "verification_report.json")["verification"]["mode"];
    }
    bool same = true;
    for (std::size_t i = 1; i < reports.size(); ++i) same = same && reports[i] == reports[0] && csvs[i] == csvs[0];
    return Outcome{same, fmt("5 runs with workers {1,8,1,3,8}, mode %s: reports %s", mode.c_str(),
                             same ? "byte-identical" : "differ")};
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
