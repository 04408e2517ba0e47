#pragma once

// Threshold neurons with excitatory and inhibitory inputs, and XOR circuits
// built from them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "noise_logic/error.hpp"
#include "noise_logic/spike_core.hpp"

namespace noise_logic {

struct NeuronSpec {
  std::string id;
  std::vector<std::string> excitatory;
  std::vector<std::string> inhibitory;
  std::size_t threshold = 1;

  void validate() const {
    detail::require(!excitatory.empty(), "neuron '" + id + "' needs an excitatory input");
    detail::require(threshold >= 1 && threshold <= excitatory.size(),
                    "neuron '" + id + "' threshold must lie in [1, #excitatory]");
  }
};

// Fires iff at least `threshold` excitatory inputs are active and no
// inhibitory input is. Inhibition is an absolute veto.
template <typename Lookup>
bool step_neuron(const NeuronSpec& spec, Lookup&& active) {
  std::size_t excited = 0;
  bool vetoed = false;
  for (const auto& ref : spec.excitatory) excited += active(ref) ? 1 : 0;
  for (const auto& ref : spec.inhibitory) vetoed = active(ref) || vetoed;
  return !vetoed && excited >= spec.threshold;
}

inline bool step_neuron(const NeuronSpec& spec, const std::map<std::string, bool>& active) {
  return step_neuron(spec, [&](const std::string& ref) {
    auto it = active.find(ref);
    if (it == active.end())
      throw UnresolvedReference("neuron '" + spec.id + "' input '" + ref + "' is unbound");
    return it->second;
  });
}

// Acyclic network of neurons listed in topological order. Every reference
// must name an input port or an earlier neuron.
class Circuit {
 public:
  Circuit(std::vector<std::string> inputs, std::vector<NeuronSpec> neurons, std::string output)
      : inputs_(std::move(inputs)), neurons_(std::move(neurons)), output_(std::move(output)) {
    compile();
  }

  const std::vector<std::string>& inputs() const noexcept { return inputs_; }
  const std::vector<NeuronSpec>& neurons() const noexcept { return neurons_; }
  const std::string& output() const noexcept { return output_; }

  // Longest path from any input port to the output, counted in neurons.
  std::size_t depth() const noexcept { return depth_[output_index_]; }

  // One clock slot with zero propagation delay. `port_values` follows the
  // order of inputs().
  bool evaluate(std::span<const std::uint8_t> port_values) const {
    if (port_values.size() != inputs_.size())
      throw DomainError("expected " + std::to_string(inputs_.size()) + " port values");
    std::vector<std::uint8_t> value(inputs_.size() + neurons_.size(), 0);
    std::copy(port_values.begin(), port_values.end(), value.begin());
    evaluate_into(value);
    return value[output_index_] != 0;
  }

  // Same as evaluate() on a caller-owned scratch buffer whose prefix already
  // holds the port values.
  void evaluate_into(std::vector<std::uint8_t>& value) const {
    for (std::size_t n = 0; n < compiled_.size(); ++n) {
      const auto& c = compiled_[n];
      std::size_t excited = 0;
      bool vetoed = false;
      for (auto i : c.excitatory) excited += value[i];
      for (auto i : c.inhibitory) vetoed = vetoed || value[i];
      value[inputs_.size() + n] = (!vetoed && excited >= c.threshold) ? 1 : 0;
    }
  }

  std::size_t output_index() const noexcept { return output_index_; }

 private:
  struct Compiled {
    std::vector<std::size_t> excitatory;
    std::vector<std::size_t> inhibitory;
    std::size_t threshold;
  };

  void compile() {
    std::unordered_map<std::string, std::size_t> index;
    auto declare = [&](const std::string& name) {
      detail::require(!name.empty(), "signal names must be non-empty");
      if (!index.emplace(name, index.size()).second)
        throw DomainError("duplicate signal name '" + name + "'");
    };
    for (const auto& p : inputs_) declare(p);
    depth_.assign(inputs_.size(), 0);

    auto resolve = [&](const NeuronSpec& n, const std::string& ref) {
      auto it = index.find(ref);
      if (it == index.end())
        throw UnresolvedReference("neuron '" + n.id + "' refers to '" + ref +
                                  "', which is neither a port nor an earlier neuron");
      return it->second;
    };

    for (const auto& n : neurons_) {
      n.validate();
      Compiled c{{}, {}, n.threshold};
      std::size_t d = 0;
      for (const auto& r : n.excitatory) {
        c.excitatory.push_back(resolve(n, r));
        d = std::max(d, depth_[c.excitatory.back()]);
      }
      for (const auto& r : n.inhibitory) {
        c.inhibitory.push_back(resolve(n, r));
        d = std::max(d, depth_[c.inhibitory.back()]);
      }
      declare(n.id);
      depth_.push_back(d + 1);
      compiled_.push_back(std::move(c));
    }

    auto it = index.find(output_);
    if (it == index.end()) throw UnresolvedReference("circuit output '" + output_ + "' is undefined");
    output_index_ = it->second;
  }

  std::vector<std::string> inputs_;
  std::vector<NeuronSpec> neurons_;
  std::string output_;
  std::vector<Compiled> compiled_;
  std::vector<std::size_t> depth_;
  std::size_t output_index_ = 0;
};

namespace detail {

// Appends one 3-neuron XOR block over signals x and y; returns its output id.
inline std::string append_xor_block(std::vector<NeuronSpec>& neurons, const std::string& prefix,
                                    const std::string& x, const std::string& y) {
  neurons.push_back({prefix + "n1", {x}, {y}, 1});
  neurons.push_back({prefix + "n2", {y}, {x}, 1});
  neurons.push_back({prefix + "out", {prefix + "n1", prefix + "n2"}, {}, 1});
  return prefix + "out";
}

inline std::string fold_range(std::vector<NeuronSpec>& neurons, const std::vector<std::string>& ports,
                              std::size_t lo, std::size_t hi, std::size_t& blocks) {
  if (hi - lo == 1) return ports[lo];
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  auto left = fold_range(neurons, ports, lo, mid, blocks);
  auto right = fold_range(neurons, ports, mid, hi, blocks);
  return append_xor_block(neurons, "b" + std::to_string(blocks++) + "_", left, right);
}

}  // namespace detail

// Two mutual AND-NOT units feeding an OR unit.
inline Circuit build_xor_pair() {
  std::vector<NeuronSpec> neurons;
  auto out = detail::append_xor_block(neurons, "", "x", "y");
  return Circuit({"x", "y"}, std::move(neurons), out);
}

inline std::string fold_port_name(std::size_t i) { return "x" + std::to_string(i); }

// N-way parity over ports x0..x{N-1} as a balanced tree of XOR blocks, the
// left half taking the extra input when N is odd. N = 1 is a wire-through.
inline Circuit build_xor_fold(std::size_t n_inputs) {
  detail::require(n_inputs >= 1, "xor fold needs at least one input");
  std::vector<std::string> ports;
  for (std::size_t i = 0; i < n_inputs; ++i) ports.push_back(fold_port_name(i));
  std::vector<NeuronSpec> neurons;
  std::size_t blocks = 0;
  auto out = detail::fold_range(neurons, ports, 0, n_inputs, blocks);
  return Circuit(std::move(ports), std::move(neurons), std::move(out));
}

// Clocked evaluation: every slot is evaluated independently.
inline SpikeTrain run_circuit(const Circuit& circuit,
                              const std::map<std::string, const SpikeTrain*>& bindings) {
  std::vector<const SpikeTrain*> ordered;
  for (const auto& port : circuit.inputs()) {
    auto it = bindings.find(port);
    if (it == bindings.end() || it->second == nullptr)
      throw UnresolvedReference("input port '" + port + "' is unbound");
    ordered.push_back(it->second);
  }
  if (ordered.empty()) throw DomainError("circuit has no input ports");
  const std::size_t n_steps = ordered.front()->size();
  for (auto* t : ordered)
    if (t->size() != n_steps) throw LengthMismatch("input trains differ in length");

  SpikeTrain out(n_steps);
  std::vector<std::uint8_t> scratch(circuit.inputs().size() + circuit.neurons().size(), 0);
  for (std::size_t t = 0; t < n_steps; ++t) {
    for (std::size_t p = 0; p < ordered.size(); ++p) scratch[p] = (*ordered[p])[t] ? 1 : 0;
    circuit.evaluate_into(scratch);
    out.set(t, scratch[circuit.output_index()] != 0);
  }
  return out;
}

// Positional binding: trains[i] drives inputs()[i].
inline SpikeTrain run_circuit(const Circuit& circuit, std::span<const SpikeTrain* const> trains) {
  if (trains.size() != circuit.inputs().size())
    throw UnresolvedReference("circuit expects " + std::to_string(circuit.inputs().size()) +
                              " input trains, got " + std::to_string(trains.size()));
  std::map<std::string, const SpikeTrain*> bindings;
  for (std::size_t i = 0; i < trains.size(); ++i) bindings[circuit.inputs()[i]] = trains[i];
  return run_circuit(circuit, bindings);
}

inline nlohmann::ordered_json circuit_to_json(const Circuit& c) {
  nlohmann::ordered_json j;
  j["inputs"] = c.inputs();
  auto neurons = nlohmann::ordered_json::array();
  for (const auto& n : c.neurons()) {
    nlohmann::ordered_json nj;
    nj["id"] = n.id;
    nj["excitatory"] = n.excitatory;
    nj["inhibitory"] = n.inhibitory;
    nj["threshold"] = n.threshold;
    neurons.push_back(std::move(nj));
  }
  j["neurons"] = std::move(neurons);
  j["output"] = c.output();
  return j;
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    std::vector<NeuronSpec> neurons;
    for (const auto& nj : j.at("neurons")) {
      neurons.push_back({nj.at("id").get<std::string>(),
                         nj.at("excitatory").get<std::vector<std::string>>(),
                         nj.value("inhibitory", std::vector<std::string>{}),
                         nj.at("threshold").get<std::size_t>()});
    }
    return Circuit(j.at("inputs").get<std::vector<std::string>>(), std::move(neurons),
                   j.at("output").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid circuit JSON: ") + e.what());
  }
}

}  // namespace noise_logic
