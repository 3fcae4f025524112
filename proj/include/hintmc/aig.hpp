#ifndef HINTMC_AIG_HPP
#define HINTMC_AIG_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hintmc::aig {

// A literal in AIGER encoding: 2*var + sign. Variable 0 is the constant
// node, so literal 0 is FALSE and literal 1 is TRUE.
class Lit {
 public:
  constexpr Lit() : code_(0) {}
  static constexpr Lit from_code(uint32_t code) { return Lit(code); }
  static constexpr Lit make(uint32_t var, bool negated = false) {
    return Lit((var << 1) | (negated ? 1u : 0u));
  }

  constexpr uint32_t code() const { return code_; }
  constexpr uint32_t var() const { return code_ >> 1; }
  constexpr bool negated() const { return code_ & 1; }
  constexpr bool is_const() const { return var() == 0; }
  constexpr bool is_false() const { return code_ == 0; }
  constexpr bool is_true() const { return code_ == 1; }

  constexpr Lit operator~() const { return Lit(code_ ^ 1); }
  constexpr bool operator==(const Lit&) const = default;
  constexpr auto operator<=>(const Lit&) const = default;

 private:
  explicit constexpr Lit(uint32_t code) : code_(code) {}
  uint32_t code_;
};

inline constexpr Lit lit_false = Lit::from_code(0);
inline constexpr Lit lit_true = Lit::from_code(1);

enum class NodeKind : uint8_t { Constant, Input, Latch, Gate };

struct Latch {
  uint32_t var = 0;
  Lit next;  // reset value is always 0 (format v1 convention)
};

struct Gate {
  uint32_t var = 0;
  Lit rhs0;
  Lit rhs1;
};

// A multi-bit register reconstructed from per-bit latch symbols
// ("ptr[3]" or "ptr_3" style). Bits are LSB first.
struct SignalGroup {
  std::string name;
  std::vector<uint32_t> bits;
  uint32_t width() const { return static_cast<uint32_t>(bits.size()); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t line)
      : std::runtime_error("aiger parse error at line " + std::to_string(line) +
                           ": " + what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct SimStep {
  std::vector<bool> state;    // latch values, in latch order
  std::vector<bool> outputs;  // output values, in output order
};

// An and-inverter netlist with latches: the transition system used by
// every other component. Immutable once constructed; construction
// validates acyclicity of the gate graph and reference well-formedness.
class Netlist {
 public:
  Netlist(uint32_t max_var, std::vector<uint32_t> inputs,
          std::vector<Latch> latches, std::vector<Gate> gates,
          std::vector<Lit> outputs, std::vector<std::string> input_names,
          std::vector<std::string> latch_names,
          std::vector<std::string> output_names,
          std::vector<std::string> comments);

  static Netlist parse(std::string_view data);
  static Netlist parse_file(const std::string& path);
  std::string serialize() const;  // canonical ASCII form

  uint32_t max_var() const { return max_var_; }
  size_t num_inputs() const { return inputs_.size(); }
  size_t num_latches() const { return latches_.size(); }
  size_t num_gates() const { return gates_.size(); }
  size_t num_outputs() const { return outputs_.size(); }

  const std::vector<uint32_t>& inputs() const { return inputs_; }
  const std::vector<Latch>& latches() const { return latches_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Lit>& outputs() const { return outputs_; }
  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<std::string>& latch_names() const { return latch_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }
  const std::vector<std::string>& comments() const { return comments_; }

  NodeKind kind(uint32_t var) const { return kinds_.at(var); }
  bool is_latch(uint32_t var) const {
    return var <= max_var_ && kinds_[var] == NodeKind::Latch;
  }
  bool is_input(uint32_t var) const {
    return var <= max_var_ && kinds_[var] == NodeKind::Input;
  }
  // Position of `var` within its class vector (inputs/latches/gates).
  uint32_t class_index(uint32_t var) const { return class_index_.at(var); }
  const Latch& latch_of(uint32_t var) const {
    return latches_[class_index(var)];
  }
  const Gate& gate_of(uint32_t var) const { return gates_[class_index(var)]; }

  const std::string& name_of_latch(uint32_t var) const {
    return latch_names_[class_index(var)];
  }
  std::optional<uint32_t> find_latch(std::string_view name) const;
  std::optional<uint32_t> find_input(std::string_view name) const;
  std::optional<size_t> find_output(std::string_view name) const;

  // Evaluates all node values for one cycle. `state`/`inputs` are indexed
  // by class position; returns the full value-per-variable vector.
  std::vector<bool> eval_nodes(const std::vector<bool>& state,
                               const std::vector<bool>& inputs) const;
  std::vector<bool> eval_outputs(const std::vector<bool>& state,
                                 const std::vector<bool>& inputs) const;
  std::vector<bool> next_state(const std::vector<bool>& state,
                               const std::vector<bool>& inputs) const;

  // Runs the machine from the all-zero initial state. Step k pairs the
  // k-th state with the outputs evaluated under trace[k]; an empty trace
  // yields the single initial step evaluated under all-zero inputs.
  std::vector<SimStep> simulate(
      const std::vector<std::vector<bool>>& trace) const;

  // Latch and input variables with a path to any root, crossing latch
  // boundaries (a reached latch contributes its next-state cone) until
  // fixpoint.
  std::vector<uint32_t> tfi_registers(std::span<const uint32_t> roots) const;

  std::vector<SignalGroup> build_groups(
      std::vector<std::string>* diags = nullptr) const;

  // Structural fingerprint covering shape, latch functions and symbols;
  // used to pair checkpoints with the netlist they came from.
  uint64_t hash() const;

  bool value_of(Lit l, const std::vector<bool>& node_values) const {
    return node_values[l.var()] ^ l.negated();
  }

 private:
  uint32_t max_var_;
  std::vector<uint32_t> inputs_;
  std::vector<Latch> latches_;
  std::vector<Gate> gates_;
  std::vector<Lit> outputs_;
  std::vector<std::string> input_names_;
  std::vector<std::string> latch_names_;
  std::vector<std::string> output_names_;
  std::vector<std::string> comments_;
  std::vector<NodeKind> kinds_;
  std::vector<uint32_t> class_index_;

  void validate() const;
};

// Incremental construction of netlists, used by the benchmark generator
// and the helper compiler. AND gates are structurally hashed and
// constant-folded, so equivalent subterms share nodes.
class NetlistBuilder {
 public:
  NetlistBuilder() = default;
  // Copy-extend mode: starts from an existing netlist; previously
  // allocated variables keep their ids and symbols.
  explicit NetlistBuilder(const Netlist& base);

  Lit add_input(std::string name);
  Lit add_latch(std::string name);           // next set later
  void set_next(Lit latch, Lit next);
  size_t add_output(Lit l, std::string name);

  Lit mk_and(Lit a, Lit b);
  Lit mk_or(Lit a, Lit b) { return ~mk_and(~a, ~b); }
  Lit mk_xor(Lit a, Lit b);
  Lit mk_implies(Lit a, Lit b) { return mk_or(~a, b); }
  Lit mk_eq(Lit a, Lit b) { return ~mk_xor(a, b); }
  Lit mk_and(std::span<const Lit> ls);
  Lit mk_or(std::span<const Lit> ls);

  uint32_t num_vars() const { return next_var_ - 1; }
  Netlist build();

 private:
  uint32_t next_var_ = 1;
  std::vector<uint32_t> inputs_;
  std::vector<Latch> latches_;
  std::vector<Gate> gates_;
  std::vector<Lit> outputs_;
  std::vector<std::string> input_names_, latch_names_, output_names_;
  std::vector<std::string> comments_;
  std::unordered_set<uint32_t> pending_latches_;  // next not yet set
  struct PairHash {
    size_t operator()(const std::pair<uint32_t, uint32_t>& p) const {
      return std::hash<uint64_t>()((uint64_t(p.first) << 32) | p.second);
    }
  };
  std::unordered_map<std::pair<uint32_t, uint32_t>, uint32_t, PairHash>
      strash_;
};

}  // namespace hintmc::aig

#endif
