#pragma once

// Clocked stochastic spike trains: generation, superposition, parity folding
// and coincidence counting.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noise_logic/error.hpp"
#include "noise_logic/rng.hpp"

namespace noise_logic {

struct ClockConfig {
  std::size_t n_steps = 1;
  double spike_prob = 0.5;
  std::uint64_t seed = 0;

  void validate() const {
    detail::require(n_steps >= 1, "n_steps must be at least 1");
    detail::require_probability(spike_prob, "spike_prob");
  }

  friend bool operator==(const ClockConfig&, const ClockConfig&) = default;
};

// Binary sequence over clock slots, 1 = spike.
class SpikeTrain {
 public:
  SpikeTrain() = default;
  explicit SpikeTrain(std::size_t n_steps) : slots_(n_steps, 0) {}

  explicit SpikeTrain(std::vector<std::uint8_t> slots) : slots_(std::move(slots)) {
    for (auto s : slots_)
      if (s > 1) throw DomainError("spike train slots must be 0 or 1");
  }

  // Parses an unpadded "0101..." string.
  static SpikeTrain from_string(std::string_view bits) {
    std::vector<std::uint8_t> slots;
    slots.reserve(bits.size());
    for (char c : bits) {
      if (c != '0' && c != '1')
        throw FormatError("spike train string may contain only '0' and '1'");
      slots.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return SpikeTrain(std::move(slots));
  }

  std::string to_string() const {
    std::string out(slots_.size(), '0');
    for (std::size_t t = 0; t < slots_.size(); ++t)
      if (slots_[t]) out[t] = '1';
    return out;
  }

  std::size_t size() const noexcept { return slots_.size(); }
  bool operator[](std::size_t t) const noexcept { return slots_[t] != 0; }
  void set(std::size_t t, bool spike) noexcept { slots_[t] = spike ? 1 : 0; }

  std::span<const std::uint8_t> slots() const noexcept { return slots_; }

  std::size_t spike_count() const noexcept {
    return static_cast<std::size_t>(std::count(slots_.begin(), slots_.end(), std::uint8_t{1}));
  }

  friend bool operator==(const SpikeTrain&, const SpikeTrain&) = default;

 private:
  std::vector<std::uint8_t> slots_;
};

struct OrthogonalSet {
  std::vector<SpikeTrain> trains;
  ClockConfig clock;
};

struct Superposition {
  SpikeTrain signal;
  // Ground truth, kept for testing and reporting only.
  std::vector<std::size_t> member_ids;

  bool has_member(std::size_t id) const {
    return std::find(member_ids.begin(), member_ids.end(), id) != member_ids.end();
  }
};

namespace detail {

inline void require_same_length(const SpikeTrain& a, const SpikeTrain& b) {
  if (a.size() != b.size())
    throw LengthMismatch("spike trains differ in length: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
}

// Stream domain for orthogonal sets, kept apart from plain train labels.
inline constexpr std::uint64_t kOrthogonalDomain = 0x4f52544847ULL;

}  // namespace detail

// Independent Bernoulli(spike_prob) slots drawn from the (seed, stream_label)
// stream. Equal inputs reproduce the same train bit for bit.
inline SpikeTrain generate_random_train(const ClockConfig& clock, std::uint64_t stream_label) {
  clock.validate();
  StreamRng rng(clock.seed, stream_label);
  SpikeTrain train(clock.n_steps);
  for (std::size_t t = 0; t < clock.n_steps; ++t) train.set(t, rng.bernoulli(clock.spike_prob));
  return train;
}

// k mutually exclusive trains. Each slot is one categorical draw: train j with
// probability spike_prob, no train with probability 1 - k * spike_prob.
inline OrthogonalSet generate_orthogonal_set(const ClockConfig& clock, std::size_t k,
                                             std::uint64_t stream_label = 0) {
  clock.validate();
  detail::require(k >= 1, "orthogonal set needs k >= 1");
  const double p = clock.spike_prob;
  const double total = static_cast<double>(k) * p;
  if (total > 1.0 + 1e-12)
    throw InfeasibleError("orthogonal set infeasible: k * p = " + std::to_string(total) +
                          " exceeds 1");

  OrthogonalSet set{std::vector<SpikeTrain>(k, SpikeTrain(clock.n_steps)), clock};
  if (p == 0.0) return set;

  StreamRng rng(derive_key(clock.seed, {detail::kOrthogonalDomain, stream_label}));
  for (std::size_t t = 0; t < clock.n_steps; ++t) {
    const double u = rng.uniform();
    if (u >= total) continue;
    const auto j = std::min(k - 1, static_cast<std::size_t>(u / p));
    set.trains[j].set(t, true);
  }
  return set;
}

// Slot-wise OR of the members.
inline Superposition superpose(std::span<const std::pair<std::size_t, SpikeTrain>> members) {
  detail::require(!members.empty(), "superposition needs at least one member");
  SpikeTrain signal(members.front().second.size());
  std::vector<std::size_t> ids;
  ids.reserve(members.size());
  for (const auto& [id, train] : members) {
    detail::require_same_length(signal, train);
    for (std::size_t t = 0; t < train.size(); ++t)
      if (train[t]) signal.set(t, true);
    ids.push_back(id);
  }
  return {std::move(signal), std::move(ids)};
}

// Superposition of the chosen members of an orthogonal (or any) train list.
// An empty selection yields the silent signal.
inline Superposition superpose_selected(std::span<const SpikeTrain> trains,
                                        std::span<const std::size_t> ids,
                                        std::size_t n_steps) {
  SpikeTrain signal(n_steps);
  for (auto id : ids) {
    if (id >= trains.size())
      throw DomainError("member id " + std::to_string(id) + " out of range");
    detail::require_same_length(signal, trains[id]);
    for (std::size_t t = 0; t < n_steps; ++t)
      if (trains[id][t]) signal.set(t, true);
  }
  return {std::move(signal), std::vector<std::size_t>(ids.begin(), ids.end())};
}

// Slot-wise parity of all inputs.
inline SpikeTrain xor_fold(std::span<const SpikeTrain* const> trains) {
  detail::require(!trains.empty(), "xor_fold needs at least one train");
  SpikeTrain out(trains.front()->size());
  for (const SpikeTrain* train : trains) {
    detail::require_same_length(out, *train);
    for (std::size_t t = 0; t < train->size(); ++t)
      if ((*train)[t]) out.set(t, !out[t]);
  }
  return out;
}

inline SpikeTrain xor_fold(std::span<const SpikeTrain> trains) {
  std::vector<const SpikeTrain*> ptrs;
  ptrs.reserve(trains.size());
  for (const auto& t : trains) ptrs.push_back(&t);
  return xor_fold(std::span<const SpikeTrain* const>(ptrs));
}

inline std::size_t coincidence_count(const SpikeTrain& a, const SpikeTrain& b) {
  detail::require_same_length(a, b);
  std::size_t n = 0;
  for (std::size_t t = 0; t < a.size(); ++t) n += (a[t] && b[t]) ? 1 : 0;
  return n;
}

}  // namespace noise_logic
