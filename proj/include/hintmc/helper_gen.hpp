#ifndef HINTMC_HELPER_GEN_HPP
#define HINTMC_HELPER_GEN_HPP

#include <memory>
#include <string>
#include <vector>

#include "hintmc/aig.hpp"
#include "hintmc/manifest.hpp"

namespace hintmc {

enum class RuleFamily : uint8_t {
  LoopBound,
  FsmOneHot,
  FifoPtrEmpty,
  FifoPtrFull,
  FifoPtrBound,
  FifoMutex,
  PipelineWindow,
  PipelineFlip,
  LoopOrder,
  FunctionOrder,
};

const char* to_string(RuleFamily f);

// Tie-break priority for ranking: smaller is served first.
int family_priority(RuleFamily f);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Unsigned value operand of a comparison: a register group read this
// cycle (or the previous one) or a constant.
struct ValueRef {
  std::vector<uint32_t> bits;  // latch vars, LSB first; empty => constant
  bool prev = false;
  uint64_t constant = 0;
  bool is_constant() const { return bits.empty(); }
};

enum class CmpOp : uint8_t { Eq, Ne, Le, Lt, Ge, Gt };

// Boolean predicate over netlist signals. Previous-cycle references and
// the sticky "has been asserted" form compile to shadow latches.
struct Expr {
  enum class Kind : uint8_t {
    Const,
    Bit,     // signal (latch or input), optionally previous-cycle
    Sticky,  // signal has been 1 at some cycle up to now
    Cmp,
    Not,
    And,
    Or,
    Implies,
    ExactlyOne,
  };

  Kind kind = Kind::Const;
  bool const_value = false;
  uint32_t signal = 0;
  bool bit_negated = false;
  bool prev = false;
  CmpOp op = CmpOp::Eq;
  ValueRef lhs, rhs;
  std::vector<uint32_t> group;
  std::vector<ExprPtr> args;

  static ExprPtr mk_const(bool v);
  static ExprPtr mk_bit(uint32_t var, bool negated = false, bool prev = false);
  static ExprPtr mk_sticky(uint32_t var);
  static ExprPtr mk_cmp(CmpOp op, ValueRef lhs, ValueRef rhs);
  static ExprPtr mk_not(ExprPtr e);
  static ExprPtr mk_and(std::vector<ExprPtr> args);
  static ExprPtr mk_or(std::vector<ExprPtr> args);
  static ExprPtr mk_implies(ExprPtr a, ExprPtr b);
  static ExprPtr mk_exactly_one(std::vector<uint32_t> group);

  std::string pretty(const aig::Netlist& netlist) const;
};

struct Helper {
  std::string id;  // deterministic: family + manifest entry names
  RuleFamily family;
  ExprPtr predicate;
  std::vector<std::string> provenance;
};

// One helper per applicable (rule, manifest entry) pair, in a fixed
// deterministic order. Entries whose signals do not resolve are skipped
// with a diagnostic.
std::vector<Helper> generate_helpers(const aig::Netlist& netlist,
                                     const Manifest& manifest,
                                     std::vector<std::string>* diags = nullptr);

struct CompiledHelper {
  aig::Netlist netlist;    // original plus monitor logic
  size_t monitor_output;   // output index of the ~predicate monitor
};

// Appends gates (plus shadow latches for previous-value and sticky
// references) encoding the negated predicate as a new bad output.
// Original variables keep their ids and symbols.
CompiledHelper compile_helper(const aig::Netlist& netlist,
                              const Helper& helper);

// Netlist nodes referenced by the predicate, the roots for fan-in
// analysis.
std::vector<uint32_t> predicate_roots(const Helper& helper);

}  // namespace hintmc

#endif
