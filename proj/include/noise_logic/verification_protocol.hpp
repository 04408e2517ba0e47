#pragma once

// Two-party string verification over a shared bank of reference spike
// trains. Each party XOR-folds the trains selected by its string into one
// "hyperspace" signal; Alice sends hers over a lossy channel and Bob compares
// it slot by slot with his own.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "noise_logic/error.hpp"
#include "noise_logic/neural_gates.hpp"
#include "noise_logic/rng.hpp"
#include "noise_logic/spike_core.hpp"
#include "noise_logic/train_io.hpp"

namespace noise_logic {

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    detail::require(!bits_.empty(), "bit string must have length >= 1");
    for (auto b : bits_) detail::require(b <= 1, "bit string values must be 0 or 1");
  }

  static BitString parse(std::string_view s) {
    std::vector<std::uint8_t> bits;
    for (char c : s) {
      if (c != '0' && c != '1') throw DomainError("bit string may contain only '0' and '1'");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
  }

  std::size_t size() const noexcept { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }

  std::string to_string() const {
    std::string s;
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

inline std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.size() != b.size()) throw LengthMismatch("bit strings differ in length");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

// 2N trains; train(i, v) is the neuro-bit for value v at bit position i.
class ReferenceBank {
 public:
  ReferenceBank(const ClockConfig& clock, std::vector<SpikeTrain> trains)
      : clock_(clock), trains_(std::move(trains)) {
    detail::require(!trains_.empty() && trains_.size() % 2 == 0,
                    "reference bank needs 2N trains");
  }

  std::size_t bit_count() const noexcept { return trains_.size() / 2; }
  const ClockConfig& clock() const noexcept { return clock_; }
  const SpikeTrain& train(std::size_t position, std::uint8_t value) const {
    return trains_.at(2 * position + value);
  }
  const std::vector<SpikeTrain>& trains() const noexcept { return trains_; }

 private:
  ClockConfig clock_;
  std::vector<SpikeTrain> trains_;
};

// Train (i, v) uses stream label 2i + v of the clock's seed, so two parties
// holding the same (seed, N, clock) hold the same bank.
inline ReferenceBank make_reference_bank(std::size_t n_bits, const ClockConfig& clock) {
  detail::require(n_bits >= 1, "N must be at least 1");
  clock.validate();
  std::vector<SpikeTrain> trains;
  trains.reserve(2 * n_bits);
  for (std::size_t label = 0; label < 2 * n_bits; ++label)
    trains.push_back(generate_random_train(clock, label));
  return ReferenceBank(clock, std::move(trains));
}

enum class Party { Alice, Bob };
enum class Engine { direct, neural_circuit };

inline Engine parse_engine(std::string_view s) {
  if (s == "direct") return Engine::direct;
  if (s == "neural_circuit" || s == "neural") return Engine::neural_circuit;
  throw DomainError("unknown engine '" + std::string(s) + "'");
}

struct HyperspaceSignal {
  SpikeTrain signal;
  Party owner = Party::Alice;
  ClockConfig clock;
};

inline HyperspaceSignal hyperspace_signal(const ReferenceBank& bank, const BitString& s,
                                          Engine engine = Engine::direct,
                                          Party owner = Party::Alice) {
  if (s.size() != bank.bit_count())
    throw LengthMismatch("string length " + std::to_string(s.size()) + " does not match bank N=" +
                         std::to_string(bank.bit_count()));
  std::vector<const SpikeTrain*> selected;
  selected.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) selected.push_back(&bank.train(i, s[i]));

  HyperspaceSignal out{{}, owner, bank.clock()};
  if (engine == Engine::direct) {
    out.signal = xor_fold(std::span<const SpikeTrain* const>(selected));
  } else {
    out.signal = run_circuit(build_xor_fold(s.size()), std::span<const SpikeTrain* const>(selected));
  }
  return out;
}

struct ChannelModel {
  double loss_prob = 0.0;
  void validate() const { detail::require_probability(loss_prob, "loss_prob"); }
};

namespace detail {
inline constexpr std::uint64_t kChannelDomain = 0x4348414eULL;
inline constexpr std::uint64_t kStringDomain = 0x53545247ULL;
}  // namespace detail

// Deletes each spike independently with probability loss_prob; silent slots
// pass unchanged. Seeded by the signal's clock and the stream label.
inline HyperspaceSignal transmit(const HyperspaceSignal& sig, const ChannelModel& ch,
                                 std::uint64_t stream_label = 0) {
  ch.validate();
  HyperspaceSignal out = sig;
  if (ch.loss_prob == 0.0) return out;
  StreamRng rng(derive_key(sig.clock.seed, {detail::kChannelDomain, stream_label}));
  for (std::size_t t = 0; t < out.signal.size(); ++t)
    if (out.signal[t] && rng.bernoulli(ch.loss_prob)) out.signal.set(t, false);
  return out;
}

// Probability that two hyperspace signals agree in one slot when the strings
// differ in d positions: (1 + (1 - 4p(1-p))^d) / 2.
inline double per_step_agreement_probability(double p, std::size_t d) {
  detail::require_probability(p, "p");
  return 0.5 * (1.0 + std::pow(1.0 - 4.0 * p * (1.0 - p), static_cast<double>(d)));
}

// False-accept probability over M compared slots.
inline double error_bound(std::size_t steps, double p, std::size_t d) {
  detail::require(steps >= 1, "M must be at least 1");
  detail::require(d >= 1, "d must be at least 1");
  return std::pow(per_step_agreement_probability(p, d), static_cast<double>(steps));
}

// Acceptance probability for strings of length N at Hamming distance d with
// spike loss on Alice's signal. Reduces to error_bound when loss = 0, d >= 1.
// With X_A = S ^ U and X_B = S ^ V, S is the parity of the N - d shared
// trains and U, V the parities of each party's d private trains.
inline double predicted_acceptance(std::size_t n_bits, std::size_t steps, double p, std::size_t d,
                                   double loss) {
  detail::require_probability(p, "p");
  detail::require_probability(loss, "loss");
  detail::require(d <= n_bits, "d must not exceed N");
  auto parity_rate = [p](std::size_t m) {
    return 0.5 * (1.0 - std::pow(1.0 - 2.0 * p, static_cast<double>(m)));
  };
  const double ps = parity_rate(n_bits - d);
  const double pu = parity_rate(d);
  double agree = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v) {
        const double w = (s ? ps : 1 - ps) * (u ? pu : 1 - pu) * (v ? pu : 1 - pu);
        const bool xa = s ^ u, xb = s ^ v;
        agree += w * (!xa ? (xb ? 0.0 : 1.0) : (xb ? 1.0 - loss : loss));
      }
  return std::pow(agree, static_cast<double>(steps));
}

enum class Decision { Accept, Reject };

inline std::string_view to_string(Decision d) { return d == Decision::Accept ? "Accept" : "Reject"; }

struct VerificationResult {
  Decision verdict = Decision::Accept;
  std::size_t steps_compared = 0;  // acceptance horizon M
  std::optional<std::size_t> first_mismatch_step;
  // Worst case over d >= 1 (d = 1) since the verifier does not know d.
  double analytic_false_accept_bound = 1.0;
};

inline VerificationResult verify(const BitString& a, const BitString& b, const ReferenceBank& bank,
                                 std::size_t steps, const ChannelModel& ch,
                                 std::uint64_t channel_stream = 0,
                                 Engine engine = Engine::direct) {
  detail::require(steps >= 1, "M must be at least 1");
  if (steps > bank.clock().n_steps)
    throw DomainError("M=" + std::to_string(steps) + " exceeds n_steps=" +
                      std::to_string(bank.clock().n_steps));
  if (a.size() != b.size()) throw LengthMismatch("strings differ in length");

  const auto received =
      transmit(hyperspace_signal(bank, a, engine, Party::Alice), ch, channel_stream);
  const auto local = hyperspace_signal(bank, b, engine, Party::Bob);

  VerificationResult r;
  r.steps_compared = steps;
  r.analytic_false_accept_bound = error_bound(steps, bank.clock().spike_prob, 1);
  for (std::size_t t = 0; t < steps; ++t) {
    if (received.signal[t] != local.signal[t]) {
      r.verdict = Decision::Reject;
      r.first_mismatch_step = t;
      break;
    }
  }
  return r;
}

// Random pair (a, b) of length N with Hamming distance exactly d.
inline std::pair<BitString, BitString> random_string_pair(std::size_t n_bits, std::size_t d,
                                                          StreamRng& rng) {
  detail::require(n_bits >= 1 && d <= n_bits, "need 1 <= N and d <= N");
  std::vector<std::uint8_t> a(n_bits);
  for (auto& bit : a) bit = static_cast<std::uint8_t>(rng.next() >> 63);
  std::vector<std::uint8_t> b = a;
  std::vector<std::size_t> idx(n_bits);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < d; ++i) {
    std::swap(idx[i], idx[i + rng.below(n_bits - i)]);
    b[idx[i]] ^= 1;
  }
  return {BitString(std::move(a)), BitString(std::move(b))};
}

struct MonteCarloEstimate {
  std::uint64_t trials = 0;
  std::uint64_t accepts = 0;
  double rate = 0.0;
  double stderr_ = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct MonteCarloParams {
  std::size_t n_bits = 1;
  std::size_t steps = 1;
  double p = 0.5;
  std::size_t d = 1;
  double loss = 0.0;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const {
    detail::require(n_bits >= 1, "N must be at least 1");
    detail::require(steps >= 1, "M must be at least 1");
    detail::require_probability(p, "p");
    detail::require(d <= n_bits, "d must lie in [0, N]");
    detail::require_probability(loss, "loss");
    detail::require(trials >= 1, "trials must be at least 1");
  }
};

inline constexpr double kZ99 = 2.5758293035489004;

// Binomial summary: standard error sqrt(r(1-r)/n) and the 99% Wilson score
// interval.
inline MonteCarloEstimate summarize(std::uint64_t accepts, std::uint64_t trials) {
  detail::require(trials >= 1 && accepts <= trials, "invalid binomial counts");
  MonteCarloEstimate e;
  e.trials = trials;
  e.accepts = accepts;
  const double n = static_cast<double>(trials);
  e.rate = static_cast<double>(accepts) / n;
  e.stderr_ = std::sqrt(e.rate * (1.0 - e.rate) / n);
  const double z2 = kZ99 * kZ99;
  const double centre = (e.rate + z2 / (2 * n)) / (1 + z2 / n);
  const double half = kZ99 * std::sqrt(e.rate * (1 - e.rate) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  e.ci_low = std::max(0.0, centre - half);
  e.ci_high = std::min(1.0, centre + half);
  return e;
}

// One full protocol instance: fresh bank, fresh string pair, channel.
// Everything is derived from (seed, trial) so trials can run in any order.
inline VerificationResult run_trial(const MonteCarloParams& mp, std::uint64_t trial) {
  const std::uint64_t trial_seed = derive_key(mp.seed, trial);
  const ClockConfig clock{mp.steps, mp.p, trial_seed};
  const auto bank = make_reference_bank(mp.n_bits, clock);
  StreamRng rng(derive_key(trial_seed, detail::kStringDomain));
  const auto [a, b] = random_string_pair(mp.n_bits, mp.d, rng);
  return verify(a, b, bank, mp.steps, ChannelModel{mp.loss});
}

inline MonteCarloEstimate monte_carlo_false_accept(const MonteCarloParams& mp) {
  mp.validate();
  unsigned workers = mp.threads ? mp.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, mp.trials));

  std::vector<std::uint64_t> accepts(workers, 0);
  auto work = [&](unsigned w) {
    std::uint64_t local = 0;
    for (std::uint64_t t = w; t < mp.trials; t += workers)
      local += run_trial(mp, t).verdict == Decision::Accept;
    accepts[w] = local;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return summarize(std::accumulate(accepts.begin(), accepts.end(), std::uint64_t{0}), mp.trials);
}

inline MonteCarloEstimate monte_carlo_false_accept(std::size_t n_bits, std::size_t steps, double p,
                                                   std::size_t d, std::uint64_t trials,
                                                   std::uint64_t seed) {
  return monte_carlo_false_accept(MonteCarloParams{n_bits, steps, p, d, 0.0, trials, seed, 0});
}

struct SweepRow {
  MonteCarloParams params;
  MonteCarloEstimate estimate;
  double analytic = 0.0;
};

inline void write_sweep_csv_header(std::ostream& os) {
  os << "N,M,p,d,loss,trials,accepts,rate,stderr,ci_low,ci_high,analytic\n";
}

inline void write_sweep_csv_row(std::ostream& os, const SweepRow& r) {
  const auto& m = r.params;
  const auto& e = r.estimate;
  os << m.n_bits << ',' << m.steps << ',' << format_double(m.p) << ',' << m.d << ','
     << format_double(m.loss) << ',' << e.trials << ',' << e.accepts << ','
     << format_double(e.rate) << ',' << format_double(e.stderr_) << ','
     << format_double(e.ci_low) << ',' << format_double(e.ci_high) << ','
     << format_double(r.analytic) << '\n';
}

inline nlohmann::ordered_json sweep_row_to_json(const SweepRow& r) {
  nlohmann::ordered_json j;
  j["N"] = r.params.n_bits;
  j["M"] = r.params.steps;
  j["p"] = r.params.p;
  j["d"] = r.params.d;
  j["loss"] = r.params.loss;
  j["trials"] = r.estimate.trials;
  j["accepts"] = r.estimate.accepts;
  j["rate"] = r.estimate.rate;
  j["stderr"] = r.estimate.stderr_;
  j["ci_low"] = r.estimate.ci_low;
  j["ci_high"] = r.estimate.ci_high;
  j["analytic"] = r.analytic;
  return j;
}

}  // namespace noise_logic
