// noise-logic: command-line front end for the noise-based logic toolkit.
//
//   gen          generate random or orthogonal spike trains
//   detect       coincidence detection of components in two superpositions
//   xor-circuit  truth-table check of the neural XOR circuitry
//   verify       one run of the string verification protocol
//   mc           Monte Carlo false-accept sweeps
//   analyze      closed-form error and latency curves

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noise_logic/noise_logic.hpp"

namespace nl = noise_logic;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode : int { kOk = 0, kValidation = 2, kCheckFailed = 3, kIo = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
};

Common with_format(std::string fmt) {
  Common c;
  c.format = std::move(fmt);
  return c;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NOISE_LOGIC_SEED"); env && *env) {
    std::uint64_t v = 0;
    const std::string s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw nl::DomainError("NOISE_LOGIC_SEED is not an unsigned integer: " + s);
    return v;
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void require_format(const std::string& fmt, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (fmt == a) return;
  throw nl::DomainError("unsupported --format '" + fmt + "'");
}

// Writes the structured payload to --out (or stdout). Human-readable notes
// go to stdout when a file is written, otherwise to stderr.
class Sink {
 public:
  explicit Sink(const Common& c) : path_(c.out) {}

  std::ostream& data() { return data_; }
  std::ostream& note() { return path_.empty() ? std::cerr : std::cout; }

  void flush() {
    if (path_.empty()) {
      std::cout << data_.str() << std::flush;
      return;
    }
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file " + path_);
    f << data_.str();
    if (!f.flush()) throw IoError("failed writing " + path_);
  }

 private:
  std::string path_;
  std::ostringstream data_;
};

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

std::uint64_t parse_trials(const std::string& text) {
  double v = 0;
  try {
    std::size_t used = 0;
    v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw nl::DomainError("--trials must be a number, got '" + text + "'");
  }
  if (!(v >= 1) || v != std::floor(v) || v > 1e15)
    throw nl::DomainError("--trials must be a positive integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

std::string read_bits_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  std::string s, line;
  while (std::getline(f, line))
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  return s;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  Common common = with_format("text");
  std::size_t n_steps = 100;
  double p = 0.5;
  std::size_t count = 1;
  bool orthogonal = false;
  std::size_t k = 3;
};

void cmd_gen(const GenArgs& a) {
  require_format(a.common.format, {"text", "json"});
  const nl::ClockConfig clock{a.n_steps, a.p, resolve_seed(a.common.seed)};
  clock.validate();
  nl::detail::require(a.count >= 1, "--count must be at least 1");

  nl::TrainCollection c{clock, {}};
  if (a.orthogonal) {
    c.trains = nl::generate_orthogonal_set(clock, a.k).trains;
  } else {
    for (std::size_t i = 0; i < a.count; ++i) c.trains.push_back(nl::generate_random_train(clock, i));
  }

  Sink sink(a.common);
  if (a.common.format == "json")
    sink.data() << nl::trains_to_json(c).dump(2) << '\n';
  else
    nl::write_trains_text(sink.data(), c);
  sink.flush();
  sink.note() << "wrote " << c.trains.size() << (a.orthogonal ? " orthogonal" : "")
              << " train(s), " << nl::format_header(clock) << '\n';
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
  Common common;
  std::size_t k = 3;
  std::vector<std::size_t> members_a{0, 1};
  std::vector<std::size_t> members_b{1, 2};
  std::string mode = "exact";
  double p = 0.2;
  std::size_t window = 200;
  std::optional<std::size_t> n_steps;
};

void cmd_detect(const DetectArgs& a) {
  require_format(a.common.format, {"csv", "json"});
  const auto mode = nl::parse_detector_mode(a.mode);
  const std::size_t n_steps = a.n_steps.value_or(a.window);
  const nl::ClockConfig clock{n_steps, a.p, resolve_seed(a.common.seed)};
  clock.validate();
  const auto report =
      nl::run_figure2_demo(a.k, a.members_a, a.members_b, clock, {a.window, mode});

  Sink sink(a.common);
  if (a.common.format == "json") {
    json j;
    j["command"] = "detect";
    j["params"] = {{"k", a.k},           {"A", a.members_a},       {"B", a.members_b},
                   {"mode", a.mode},     {"p", a.p},               {"window", a.window},
                   {"n_steps", n_steps}, {"seed", clock.seed}};
    j["rows"] = nl::demo_rows_to_json(report);
    sink.data() << j.dump(2) << '\n';
  } else {
    sink.data() << "# noise-logic detect k=" << a.k << " A=" << join(a.members_a)
                << " B=" << join(a.members_b) << " mode=" << a.mode
                << " p=" << nl::format_double(a.p) << " window=" << a.window
                << " n_steps=" << n_steps << " seed=" << clock.seed << '\n';
    nl::write_demo_csv(sink.data(), report);
  }
  sink.flush();

  auto& os = sink.note();
  os << "component  sup  member  verdict    step  evidence\n";
  for (const auto& r : report.rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%9zu  %3c  %6s  %-9s  %4s  %8zu\n", r.component_id,
                  r.superposition, r.ground_truth ? "yes" : "no",
                  std::string(nl::to_string(r.outcome.verdict)).c_str(),
                  r.outcome.decision_step ? std::to_string(*r.outcome.decision_step).c_str() : "-",
                  r.outcome.evidence_count);
    os << line;
  }
}

// ---------------------------------------------------------------- xor-circuit

struct XorArgs {
  Common common;
  std::size_t n = 2;
  std::size_t limit = 6;
  std::size_t n_steps = 1000;
  std::string dump;
  std::string load;
};

void cmd_xor_circuit(const XorArgs& a) {
  require_format(a.common.format, {"csv", "json"});
  std::optional<nl::Circuit> loaded;
  if (!a.load.empty()) {
    std::ifstream f(a.load);
    if (!f) throw IoError("cannot read " + a.load);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw nl::FormatError(std::string("invalid circuit JSON: ") + e.what());
    }
    loaded = nl::circuit_from_json(j);
  }
  const nl::Circuit circuit = loaded ? *loaded : nl::build_xor_fold(a.n);
  const std::size_t n = circuit.inputs().size();
  nl::detail::require(n >= 1, "circuit needs at least one input");
  if (n > a.limit)
    throw nl::DomainError("N=" + std::to_string(n) + " exceeds exhaustive-check limit " +
                          std::to_string(a.limit));
  nl::detail::require(a.n_steps >= 1, "--n-steps must be at least 1");

  if (!a.dump.empty()) {
    std::ofstream f(a.dump, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + a.dump);
    f << nl::circuit_to_json(circuit).dump(2) << '\n';
    if (!f.flush()) throw IoError("failed writing " + a.dump);
  }

  const std::uint64_t combos = std::uint64_t{1} << n;
  std::uint64_t passed = 0;
  std::vector<std::uint8_t> in(n);
  for (std::uint64_t m = 0; m < combos; ++m) {
    bool parity = false;
    for (std::size_t i = 0; i < n; ++i) {
      in[i] = (m >> i) & 1;
      parity ^= in[i] != 0;
    }
    passed += circuit.evaluate(in) == parity;
  }

  // Random-train cross-check against the direct parity fold.
  const nl::ClockConfig clock{a.n_steps, 0.5, resolve_seed(a.common.seed)};
  std::vector<nl::SpikeTrain> trains;
  for (std::size_t i = 0; i < n; ++i) trains.push_back(nl::generate_random_train(clock, i));
  std::vector<const nl::SpikeTrain*> ptrs;
  for (const auto& t : trains) ptrs.push_back(&t);
  const auto via_circuit = nl::run_circuit(circuit, ptrs);
  const auto via_fold = nl::xor_fold(std::span<const nl::SpikeTrain* const>(ptrs));
  std::size_t mismatches = 0;
  for (std::size_t t = 0; t < a.n_steps; ++t) mismatches += via_circuit[t] != via_fold[t];

  const std::size_t neurons = circuit.neurons().size();
  const std::size_t depth = circuit.depth();

  Sink sink(a.common);
  if (a.common.format == "json") {
    json j;
    j["command"] = "xor-circuit";
    j["params"] = {{"n", n}, {"limit", a.limit}, {"n_steps", a.n_steps}, {"seed", clock.seed},
                   {"source", loaded ? a.load : std::string("built-in")}};
    j["inputs"] = n;
    j["combinations"] = combos;
    j["passed"] = passed;
    j["neurons"] = neurons;
    j["neuron_depth"] = depth;
    j["xor_blocks"] = neurons / 3;
    j["block_depth"] = depth / 2;
    j["random_slots"] = a.n_steps;
    j["random_mismatches"] = mismatches;
    sink.data() << j.dump(2) << '\n';
  } else {
    sink.data() << "# noise-logic xor-circuit n=" << n << " limit=" << a.limit
                << " n_steps=" << a.n_steps << " seed=" << clock.seed
                << " source=" << (loaded ? a.load : std::string("built-in")) << '\n'
                << "inputs,combinations,passed,neurons,neuron_depth,xor_blocks,block_depth,"
                   "random_slots,random_mismatches\n"
                << n << ',' << combos << ',' << passed << ',' << neurons << ',' << depth << ','
                << neurons / 3 << ',' << depth / 2 << ',' << a.n_steps << ',' << mismatches
                << '\n';
  }
  sink.flush();
  sink.note() << passed << '/' << combos << " combinations pass; " << neurons / 3
              << " XOR blocks, " << neurons << " neurons, depth " << depth / 2 << " blocks; "
              << mismatches << '/' << a.n_steps << " random-slot mismatches\n";
  if (passed != combos || mismatches != 0) throw CheckFailed("XOR circuit disagrees with parity");
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common common = with_format("json");
  std::string a, b, a_file, b_file;
  std::size_t steps = 83;
  double p = 0.5;
  double loss = 0.0;
  std::optional<std::size_t> n_steps;
  std::string engine = "direct";
};

void cmd_verify(const VerifyArgs& v) {
  require_format(v.common.format, {"csv", "json"});
  const auto text_a = v.a_file.empty() ? v.a : read_bits_file(v.a_file);
  const auto text_b = v.b_file.empty() ? v.b : read_bits_file(v.b_file);
  if (text_a.empty() || text_b.empty())
    throw nl::DomainError("both strings are required (--a/--a-file and --b/--b-file)");
  const auto a = nl::BitString::parse(text_a);
  const auto b = nl::BitString::parse(text_b);
  if (a.size() != b.size())
    throw nl::LengthMismatch("strings differ in length: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
  const auto engine = nl::parse_engine(v.engine);
  nl::detail::require(v.steps >= 1, "--M must be at least 1");
  const std::size_t n_steps = v.n_steps.value_or(v.steps);
  if (v.steps > n_steps)
    throw nl::DomainError("M=" + std::to_string(v.steps) + " exceeds n_steps=" +
                          std::to_string(n_steps));
  const nl::ClockConfig clock{n_steps, v.p, resolve_seed(v.common.seed)};
  const auto bank = nl::make_reference_bank(a.size(), clock);
  const auto r = nl::verify(a, b, bank, v.steps, {v.loss}, 0, engine);

  Sink sink(v.common);
  if (v.common.format == "json") {
    json j;
    j["command"] = "verify";
    j["params"] = {{"N", a.size()},       {"M", v.steps},   {"p", v.p},
                   {"loss", v.loss},      {"n_steps", n_steps}, {"engine", v.engine},
                   {"seed", clock.seed}};
    j["verdict"] = std::string(nl::to_string(r.verdict));
    j["steps_compared"] = r.steps_compared;
    if (r.first_mismatch_step)
      j["first_mismatch_step"] = *r.first_mismatch_step;
    else
      j["first_mismatch_step"] = nullptr;
    j["analytic_false_accept_bound"] = r.analytic_false_accept_bound;
    sink.data() << j.dump(2) << '\n';
  } else {
    sink.data() << "# noise-logic verify N=" << a.size() << " M=" << v.steps
                << " p=" << nl::format_double(v.p) << " loss=" << nl::format_double(v.loss)
                << " n_steps=" << n_steps << " engine=" << v.engine << " seed=" << clock.seed
                << '\n'
                << "verdict,steps_compared,first_mismatch_step,analytic_false_accept_bound\n"
                << nl::to_string(r.verdict) << ',' << r.steps_compared << ',';
    if (r.first_mismatch_step) sink.data() << *r.first_mismatch_step;
    sink.data() << ',' << nl::format_double(r.analytic_false_accept_bound) << '\n';
  }

  char bound[32];
  std::snprintf(bound, sizeof bound, "%.3e", r.analytic_false_accept_bound);
  auto& os = sink.note();
  os << nl::to_string(r.verdict) << ": M=" << v.steps;
  if (r.first_mismatch_step) os << ", first mismatch at step " << *r.first_mismatch_step;
  os << ", false-accept bound " << bound << '\n';
  sink.flush();
}

// ---------------------------------------------------------------- mc

struct McArgs {
  Common common;
  std::vector<std::size_t> n_bits{32};
  std::vector<std::size_t> steps{8};
  std::vector<double> p{0.5};
  std::vector<std::size_t> d{1};
  std::vector<double> loss{0.0};
  std::string trials = "1e5";
  unsigned threads = 0;
};

void cmd_mc(const McArgs& a) {
  require_format(a.common.format, {"csv", "json"});
  const std::uint64_t trials = parse_trials(a.trials);
  std::vector<nl::MonteCarloParams> grid;
  for (auto n : a.n_bits)
    for (auto m : a.steps)
      for (auto p : a.p)
        for (auto d : a.d)
          for (auto l : a.loss) {
            nl::MonteCarloParams mp{n, m, p, d, l, trials, 0, a.threads};
            mp.validate();
            grid.push_back(mp);
          }
  nl::detail::require(!grid.empty(), "empty parameter grid");
  const std::uint64_t seed = resolve_seed(a.common.seed);

  std::vector<nl::SweepRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto mp = grid[i];
    mp.seed = nl::derive_key(seed, i);
    rows.push_back({mp, nl::monte_carlo_false_accept(mp),
                    nl::predicted_acceptance(mp.n_bits, mp.steps, mp.p, mp.d, mp.loss)});
  }

  auto list = [](const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(v[i])>>)
        s += nl::format_double(v[i]);
      else
        s += std::to_string(v[i]);
    }
    return s;
  };

  Sink sink(a.common);
  if (a.common.format == "json") {
    json j;
    j["command"] = "mc";
    j["params"] = {{"N", a.n_bits}, {"M", a.steps},     {"p", a.p},      {"d", a.d},
                   {"loss", a.loss}, {"trials", trials}, {"seed", seed}};
    j["rows"] = json::array();
    for (const auto& r : rows) j["rows"].push_back(nl::sweep_row_to_json(r));
    sink.data() << j.dump(2) << '\n';
  } else {
    sink.data() << "# noise-logic mc N=" << list(a.n_bits) << " M=" << list(a.steps)
                << " p=" << list(a.p) << " d=" << list(a.d) << " loss=" << list(a.loss)
                << " trials=" << trials << " seed=" << seed
                << " row_seed=derive_key(seed,row_index)\n";
    nl::write_sweep_csv_header(sink.data());
    for (const auto& r : rows) nl::write_sweep_csv_row(sink.data(), r);
  }
  sink.flush();
  for (const auto& r : rows) {
    char line[160];
    std::snprintf(line, sizeof line, "N=%zu M=%zu p=%g d=%zu loss=%g: rate %.6g (analytic %.6g)\n",
                  r.params.n_bits, r.params.steps, r.params.p, r.params.d, r.params.loss,
                  r.estimate.rate, r.analytic);
    sink.note() << line;
  }
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  Common common;
  std::string curve = "all";
  std::vector<double> p{0.5};
  std::size_t t_max = 50;
  std::size_t m_max = 90;
  std::size_t d_max = 10;
  std::size_t d = 1;
};

void cmd_analyze(const AnalyzeArgs& a) {
  require_format(a.common.format, {"csv", "json"});
  const bool all = a.curve == "all";
  if (!all && a.curve != "undecided" && a.curve != "error-bound" && a.curve != "agreement")
    throw nl::DomainError("--curve must be all, undecided, error-bound or agreement");
  nl::detail::require(a.t_max >= 1 && a.m_max >= 1 && a.d_max >= 1 && a.d >= 1,
                      "curve ranges must be at least 1");
  for (double p : a.p) nl::detail::require_probability(p, "p");

  struct Point {
    std::string curve;
    double p;
    std::optional<std::size_t> d;
    std::size_t x;
    double value;
  };
  std::vector<Point> pts;
  for (double p : a.p) {
    if (all || a.curve == "undecided")
      for (std::size_t t = 1; t <= a.t_max; ++t)
        pts.push_back({"undecided", p, std::nullopt, t, nl::undecided_probability(p, t)});
    if (all || a.curve == "error-bound")
      for (std::size_t m = 1; m <= a.m_max; ++m)
        pts.push_back({"error_bound", p, a.d, m, nl::error_bound(m, p, a.d)});
    if (all || a.curve == "agreement")
      for (std::size_t d = 0; d <= a.d_max; ++d)
        pts.push_back({"agreement", p, d, d, nl::per_step_agreement_probability(p, d)});
  }

  Sink sink(a.common);
  if (a.common.format == "json") {
    json j;
    j["command"] = "analyze";
    j["params"] = {{"curve", a.curve}, {"p", a.p},         {"T_max", a.t_max},
                   {"M_max", a.m_max}, {"d_max", a.d_max}, {"d", a.d}};
    j["rows"] = json::array();
    for (const auto& pt : pts) {
      json r;
      r["curve"] = pt.curve;
      r["p"] = pt.p;
      if (pt.d)
        r["d"] = *pt.d;
      else
        r["d"] = nullptr;
      r["x"] = pt.x;
      r["value"] = pt.value;
      j["rows"].push_back(std::move(r));
    }
    sink.data() << j.dump(2) << '\n';
  } else {
    sink.data() << "# noise-logic analyze curve=" << a.curve << " T_max=" << a.t_max
                << " M_max=" << a.m_max << " d_max=" << a.d_max << " d=" << a.d << '\n'
                << "# undecided: x=T value=(1-p)^T; error_bound: x=M value=agreement(p,d)^M;"
                   " agreement: x=d value=(1+(1-4p(1-p))^d)/2\n"
                << "curve,p,d,x,value\n";
    for (const auto& pt : pts) {
      sink.data() << pt.curve << ',' << nl::format_double(pt.p) << ',';
      if (pt.d) sink.data() << *pt.d;
      sink.data() << ',' << pt.x << ',' << nl::format_double(pt.value) << '\n';
    }
  }
  sink.flush();
  sink.note() << "wrote " << pts.size() << " curve points\n";
}

void add_common(CLI::App* sub, Common& c, bool with_seed = true) {
  if (with_seed) sub->add_option("--seed", c.seed, "64-bit seed (fallback: NOISE_LOGIC_SEED, then entropy)");
  sub->add_option("--out,-o", c.out, "output file (default: stdout)");
  sub->add_option("--format", c.format, "output format")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-based logic toolkit: spike trains, coincidence detection, neural XOR "
               "circuits and randomized string verification"};
  app.set_config("--config", "", "TOML/INI file with default option values; flags override it");
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate spike trains");
  add_common(g, gen.common);
  g->add_option("--n-steps", gen.n_steps, "clock slots per train")->capture_default_str();
  g->add_option("--p", gen.p, "per-slot spike probability")->capture_default_str();
  g->add_option("--count", gen.count, "number of independent trains")->capture_default_str();
  g->add_flag("--orthogonal", gen.orthogonal, "draw one orthogonal set instead");
  g->add_option("--k", gen.k, "trains in the orthogonal set")->capture_default_str();

  DetectArgs det;
  auto* d = app.add_subcommand("detect", "detect components of superpositions A and B");
  add_common(d, det.common);
  d->add_option("--k", det.k, "number of components")->capture_default_str();
  d->add_option("--A", det.members_a, "members of superposition A")->delimiter(',')->capture_default_str();
  d->add_option("--B", det.members_b, "members of superposition B")->delimiter(',')->capture_default_str();
  d->add_option("--mode", det.mode, "exact | independent")->capture_default_str();
  d->add_option("--p", det.p, "per-slot spike probability")->capture_default_str();
  d->add_option("--window", det.window, "observation window T in slots")->capture_default_str();
  d->add_option("--n-steps", det.n_steps, "train length (default: window)");

  XorArgs xr;
  auto* x = app.add_subcommand("xor-circuit", "verify the neural XOR circuitry");
  add_common(x, xr.common);
  x->add_option("--n,--N", xr.n, "inputs of the XOR fold")->capture_default_str();
  x->add_option("--limit", xr.limit, "largest N checked exhaustively")->capture_default_str();
  x->add_option("--n-steps", xr.n_steps, "slots of the random-train cross-check")->capture_default_str();
  x->add_option("--dump", xr.dump, "write the circuit description (JSON) to this file");
  x->add_option("--load", xr.load, "check a circuit description (JSON) instead");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "run the string verification protocol once");
  add_common(v, ver.common);
  v->add_option("--a", ver.a, "Alice's bit string");
  v->add_option("--b", ver.b, "Bob's bit string");
  v->add_option("--a-file", ver.a_file, "file holding Alice's bit string");
  v->add_option("--b-file", ver.b_file, "file holding Bob's bit string");
  v->add_option("--M", ver.steps, "compared steps")->capture_default_str();
  v->add_option("--p", ver.p, "per-slot spike probability")->capture_default_str();
  v->add_option("--loss", ver.loss, "spike loss probability of the channel")->capture_default_str();
  v->add_option("--n-steps", ver.n_steps, "train length (default: M)");
  v->add_option("--engine", ver.engine, "direct | neural")->capture_default_str();

  McArgs mc;
  auto* m = app.add_subcommand("mc", "Monte Carlo false-accept sweep");
  add_common(m, mc.common);
  m->add_option("--N", mc.n_bits, "string lengths")->delimiter(',')->capture_default_str();
  m->add_option("--M", mc.steps, "compared steps")->delimiter(',')->capture_default_str();
  m->add_option("--p", mc.p, "spike probabilities")->delimiter(',')->capture_default_str();
  m->add_option("--d", mc.d, "Hamming distances")->delimiter(',')->capture_default_str();
  m->add_option("--loss", mc.loss, "channel loss probabilities")->delimiter(',')->capture_default_str();
  m->add_option("--trials", mc.trials, "trials per grid point (e.g. 1e5)")->capture_default_str();
  m->add_option("--threads", mc.threads, "worker threads (0 = all cores)")->capture_default_str();

  AnalyzeArgs an;
  auto* z = app.add_subcommand("analyze", "closed-form curves, no simulation");
  add_common(z, an.common, false);
  z->add_option("--curve", an.curve, "all | undecided | error-bound | agreement")->capture_default_str();
  z->add_option("--p", an.p, "spike probabilities")->delimiter(',')->capture_default_str();
  z->add_option("--T-max", an.t_max, "largest window T")->capture_default_str();
  z->add_option("--M-max", an.m_max, "largest step count M")->capture_default_str();
  z->add_option("--d-max", an.d_max, "largest Hamming distance")->capture_default_str();
  z->add_option("--d", an.d, "Hamming distance of the error-bound curve")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (g->parsed()) cmd_gen(gen);
    else if (d->parsed()) cmd_detect(det);
    else if (x->parsed()) cmd_xor_circuit(xr);
    else if (v->parsed()) cmd_verify(ver);
    else if (m->parsed()) cmd_mc(mc);
    else if (z->parsed()) cmd_analyze(an);
  } catch (const CheckFailed& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const nl::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
