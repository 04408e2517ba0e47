#pragma once

// Text and JSON serialization of spike-train collections.
//
// Text form:
//   n_steps=<int> p=<float> seed=<int>
//   0101...
//   ...
// JSON form:
//   {"n_steps": ..., "p": ..., "seed": ..., "trains": ["0101...", ...]}

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "noise_logic/error.hpp"
#include "noise_logic/spike_core.hpp"

namespace noise_logic {

struct TrainCollection {
  ClockConfig clock;
  std::vector<SpikeTrain> trains;
};

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_header(const ClockConfig& clock) {
  return "n_steps=" + std::to_string(clock.n_steps) + " p=" + format_double(clock.spike_prob) +
         " seed=" + std::to_string(clock.seed);
}

inline void write_trains_text(std::ostream& os, const TrainCollection& c) {
  os << format_header(c.clock) << '\n';
  for (const auto& t : c.trains) os << t.to_string() << '\n';
}

namespace detail {

template <typename T>
T parse_field(const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) throw FormatError("expected '" + prefix + "...' in header");
  const char* first = token.data() + prefix.size();
  const char* last = token.data() + token.size();
  T value{};
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) throw FormatError("bad value in header field " + key);
  return value;
}

}  // namespace detail

inline TrainCollection read_trains_text(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("missing header line");
  std::istringstream header(line);
  std::string f_n, f_p, f_seed, extra;
  if (!(header >> f_n >> f_p >> f_seed) || (header >> extra))
    throw FormatError("header must be 'n_steps=<int> p=<float> seed=<int>'");

  TrainCollection c;
  c.clock.n_steps = detail::parse_field<std::size_t>(f_n, "n_steps");
  c.clock.spike_prob = detail::parse_field<double>(f_p, "p");
  c.clock.seed = detail::parse_field<std::uint64_t>(f_seed, "seed");
  c.clock.validate();

  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto train = SpikeTrain::from_string(line);
    if (train.size() != c.clock.n_steps)
      throw FormatError("train length " + std::to_string(train.size()) +
                        " does not match n_steps=" + std::to_string(c.clock.n_steps));
    c.trains.push_back(std::move(train));
  }
  return c;
}

inline nlohmann::ordered_json trains_to_json(const TrainCollection& c) {
  nlohmann::ordered_json j;
  j["n_steps"] = c.clock.n_steps;
  j["p"] = c.clock.spike_prob;
  j["seed"] = c.clock.seed;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : c.trains) arr.push_back(t.to_string());
  j["trains"] = std::move(arr);
  return j;
}

inline TrainCollection trains_from_json(const nlohmann::json& j) {
  try {
    TrainCollection c;
    c.clock.n_steps = j.at("n_steps").get<std::size_t>();
    c.clock.spike_prob = j.at("p").get<double>();
    c.clock.seed = j.at("seed").get<std::uint64_t>();
    c.clock.validate();
    for (const auto& s : j.at("trains")) {
      auto train = SpikeTrain::from_string(s.get<std::string>());
      if (train.size() != c.clock.n_steps) throw FormatError("train length does not match n_steps");
      c.trains.push_back(std::move(train));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid train JSON: ") + e.what());
  }
}

}  // namespace noise_logic
