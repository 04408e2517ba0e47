#pragma once

// Presence/absence of a reference component in a superposition, decided by
// slot coincidence, plus the closed-form error and latency curves.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "noise_logic/error.hpp"
#include "noise_logic/spike_core.hpp"

namespace noise_logic {

enum class DetectorMode { exact_orthogonal, independent };

enum class Verdict { Present, Absent, Undecided };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Present: return "Present";
    case Verdict::Absent: return "Absent";
    case Verdict::Undecided: return "Undecided";
  }
  return "?";
}

inline std::string_view to_string(DetectorMode m) {
  return m == DetectorMode::exact_orthogonal ? "exact" : "independent";
}

inline DetectorMode parse_detector_mode(std::string_view s) {
  if (s == "exact" || s == "exact_orthogonal") return DetectorMode::exact_orthogonal;
  if (s == "independent") return DetectorMode::independent;
  throw DomainError("unknown detector mode '" + std::string(s) + "'");
}

struct DetectorConfig {
  std::size_t max_window = 1;
  DetectorMode mode = DetectorMode::exact_orthogonal;
};

struct DetectionOutcome {
  Verdict verdict = Verdict::Undecided;
  std::optional<std::size_t> decision_step;  // empty iff Undecided
  std::size_t evidence_count = 0;            // reference spikes examined
};

// Scans slots 0..max_window-1 in order.
//
// exact_orthogonal: the first reference spike decides; covered means Present,
// uncovered means Absent. Requires the reference and every member to come
// from one orthogonal set (caller's contract).
//
// independent: an uncovered reference spike proves Absent at once. If every
// reference spike in the window is covered the verdict is Present, decided at
// the last window slot, with evidence_count covered spikes.
inline DetectionOutcome detect_component(const SpikeTrain& reference, const Superposition& sup,
                                         const DetectorConfig& cfg) {
  detail::require_same_length(reference, sup.signal);
  detail::require(cfg.max_window >= 1, "max_window must be at least 1");
  if (cfg.max_window > reference.size())
    throw DomainError("max_window " + std::to_string(cfg.max_window) + " exceeds n_steps " +
                      std::to_string(reference.size()));

  DetectionOutcome out;
  for (std::size_t t = 0; t < cfg.max_window; ++t) {
    if (!reference[t]) continue;
    ++out.evidence_count;
    const bool covered = sup.signal[t];
    if (!covered) {
      out.verdict = Verdict::Absent;
      out.decision_step = t;
      return out;
    }
    if (cfg.mode == DetectorMode::exact_orthogonal) {
      out.verdict = Verdict::Present;
      out.decision_step = t;
      return out;
    }
  }
  if (out.evidence_count > 0) {
    out.verdict = Verdict::Present;
    out.decision_step = cfg.max_window - 1;
  }
  return out;
}

// (1 - p)^T: chance that a rate-p reference stays silent for T slots.
inline double undecided_probability(double p, std::size_t window) {
  detail::require_probability(p, "p");
  detail::require(window >= 1, "window must be at least 1");
  return std::pow(1.0 - p, static_cast<double>(window));
}

// q^k: chance that k reference spikes all land on spikes of a superposition
// whose per-slot rate (without the reference) is q.
inline double false_positive_probability(double q, std::size_t k) {
  detail::require_probability(q, "q");
  detail::require(k >= 1, "k must be at least 1");
  return std::pow(q, static_cast<double>(k));
}

// Per-slot rate of an OR of independent members with the given rates.
inline double superposition_rate(std::span<const double> member_rates) {
  double silent = 1.0;
  for (double r : member_rates) {
    detail::require_probability(r, "member rate");
    silent *= 1.0 - r;
  }
  return 1.0 - silent;
}

struct DemoRow {
  std::size_t component_id = 0;
  char superposition = 'A';
  bool ground_truth = false;
  DetectionOutcome outcome;
};

struct DemoReport {
  std::vector<DemoRow> rows;
};

// Builds k component trains, forms superpositions A and B from the given
// memberships and runs every (component, superposition) detection. Exact mode
// draws an orthogonal set; independent mode draws k independent trains.
inline DemoReport run_figure2_demo(std::size_t k_components,
                                   std::span<const std::size_t> members_a,
                                   std::span<const std::size_t> members_b,
                                   const ClockConfig& clock, const DetectorConfig& cfg) {
  detail::require(k_components >= 1, "k_components must be at least 1");
  for (auto ids : {members_a, members_b})
    for (auto id : ids)
      detail::require(id < k_components, "membership id " + std::to_string(id) +
                                             " outside 0.." + std::to_string(k_components - 1));
  detail::require(cfg.max_window >= 1 && cfg.max_window <= clock.n_steps,
                  "window must lie in [1, n_steps]");

  std::vector<SpikeTrain> trains;
  if (cfg.mode == DetectorMode::exact_orthogonal) {
    trains = generate_orthogonal_set(clock, k_components).trains;
  } else {
    clock.validate();
    for (std::size_t j = 0; j < k_components; ++j)
      trains.push_back(generate_random_train(clock, j));
  }

  const Superposition sup[2] = {superpose_selected(trains, members_a, clock.n_steps),
                                superpose_selected(trains, members_b, clock.n_steps)};
  DemoReport report;
  for (std::size_t j = 0; j < k_components; ++j) {
    for (int s = 0; s < 2; ++s) {
      report.rows.push_back({j, static_cast<char>('A' + s), sup[s].has_member(j),
                             detect_component(trains[j], sup[s], cfg)});
    }
  }
  return report;
}

inline void write_demo_csv(std::ostream& os, const DemoReport& r) {
  os << "component_id,superposition,verdict,decision_step,evidence_count\n";
  for (const auto& row : r.rows) {
    os << row.component_id << ',' << row.superposition << ',' << to_string(row.outcome.verdict)
       << ',';
    if (row.outcome.decision_step) os << *row.outcome.decision_step;
    os << ',' << row.outcome.evidence_count << '\n';
  }
}

inline nlohmann::ordered_json demo_rows_to_json(const DemoReport& r) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json j;
    j["component_id"] = row.component_id;
    j["superposition"] = std::string(1, row.superposition);
    j["verdict"] = std::string(to_string(row.outcome.verdict));
    if (row.outcome.decision_step)
      j["decision_step"] = *row.outcome.decision_step;
    else
      j["decision_step"] = nullptr;
    j["evidence_count"] = row.outcome.evidence_count;
    rows.push_back(std::move(j));
  }
  return rows;
}

}  // namespace noise_logic
