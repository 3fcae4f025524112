#ifndef HINTMC_SAT_HPP
#define HINTMC_SAT_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hintmc/aig.hpp"

namespace hintmc::sat {

using Var = int32_t;

struct Lit {
  int32_t x = -2;

  Lit() = default;
  Lit(Var v, bool neg) : x(2 * v + (neg ? 1 : 0)) {}

  Var var() const { return x >> 1; }
  bool sign() const { return x & 1; }
  Lit operator~() const {
    Lit l;
    l.x = x ^ 1;
    return l;
  }
  bool operator==(const Lit&) const = default;
  auto operator<=>(const Lit&) const = default;
};

inline Lit mk_lit(Var v, bool neg = false) { return Lit(v, neg); }

enum class Status : uint8_t { Sat, Unsat, Unknown };

using ClauseHandle = Var;  // activation variable of a retractable clause

// Conflict-driven clause-learning solver: two-watched-literal propagation,
// first-UIP learning with recursive minimization, VSIDS activities, phase
// saving, Luby restarts, incremental solving under assumptions with
// failed-assumption extraction. Deterministic given the same sequence of
// calls.
class Solver {
 public:
  Solver();

  Var new_var();
  int32_t num_vars() const { return static_cast<int32_t>(assigns_.size()); }

  // Returns false if the database became unsatisfiable at level 0.
  bool add_clause(std::vector<Lit> lits);

  // A retractable clause is guarded by a fresh activation variable and is
  // part of every query until retracted.
  ClauseHandle add_retractable(std::vector<Lit> lits);
  void retract(ClauseHandle h);

  Status solve(std::span<const Lit> assumptions = {});

  // Valid after Sat.
  bool model_value(Lit l) const;
  bool model_value(Var v) const { return model_[v] == 1; }

  // Valid after Unsat: a subset of the assumptions sufficient for
  // unsatisfiability (activation literals of retractable clauses are
  // filtered out).
  const std::vector<Lit>& failed_assumptions() const { return conflict_; }

  // Conflicts allowed per solve() call; < 0 means unlimited. On budget
  // exhaustion solve returns Unknown.
  void set_conflict_budget(int64_t budget) { budget_ = budget; }

  // When set, every query is dumped as "<prefix><n>.cnf" before solving.
  void set_dimacs_prefix(std::string prefix) { dimacs_prefix_ = std::move(prefix); }

  uint64_t num_solves() const { return stats_solves_; }
  uint64_t num_conflicts() const { return stats_conflicts_; }
  uint64_t num_decisions() const { return stats_decisions_; }
  uint64_t num_propagations() const { return stats_propagations_; }

 private:
  using CRef = uint32_t;
  static constexpr CRef kNoReason = std::numeric_limits<CRef>::max();

  // Clause arena. Layout per clause: one header word (size | learnt<<31),
  // an activity word for learnt clauses, then the literals. Stored as Lit
  // so literal access needs no type punning.
  std::vector<Lit> mem_;

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  std::vector<std::vector<Watcher>> watches_;  // indexed by lit code
  std::vector<int8_t> assigns_;                // 1 true, -1 false, 0 undef
  std::vector<int8_t> model_;
  std::vector<int8_t> polarity_;  // saved phase
  std::vector<int32_t> level_;
  std::vector<CRef> reason_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<int32_t> trail_lim_;
  size_t qhead_ = 0;

  std::vector<CRef> learnts_;
  std::vector<CRef> originals_;

  // Order heap for VSIDS decisions.
  std::vector<Var> heap_;
  std::vector<int32_t> heap_pos_;

  std::vector<int8_t> seen_;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_toclear_;

  std::vector<Lit> assumptions_;
  std::vector<Lit> conflict_;

  std::vector<Var> active_acts_;  // activation vars of live retractable clauses
  std::vector<int8_t> is_act_;    // marks internal activation variables

  bool ok_ = true;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  int64_t budget_ = -1;
  std::string dimacs_prefix_;
  mutable uint64_t dimacs_counter_ = 0;

  uint64_t stats_solves_ = 0, stats_conflicts_ = 0, stats_decisions_ = 0,
           stats_propagations_ = 0;

  uint32_t clause_size(CRef c) const {
    return static_cast<uint32_t>(mem_[c].x) & 0x7fffffff;
  }
  bool clause_learnt(CRef c) const {
    return static_cast<uint32_t>(mem_[c].x) >> 31;
  }
  Lit* clause_lits(CRef c) {
    return &mem_[c + 1 + (clause_learnt(c) ? 1 : 0)];
  }
  const Lit* clause_lits(CRef c) const {
    return &mem_[c + 1 + (clause_learnt(c) ? 1 : 0)];
  }
  float clause_act(CRef c) const;
  void set_clause_act(CRef c, float f);

  int8_t value(Lit l) const {
    int8_t a = assigns_[l.var()];
    return l.sign() ? static_cast<int8_t>(-a) : a;
  }
  int32_t decision_level() const {
    return static_cast<int32_t>(trail_lim_.size());
  }

  CRef alloc_clause(std::span<const Lit> lits, bool learnt);
  void attach_clause(CRef c);
  void detach_clause(CRef c);

  void unchecked_enqueue(Lit p, CRef from);
  CRef propagate();
  void cancel_until(int32_t level);
  void new_decision_level() { trail_lim_.push_back(static_cast<int32_t>(trail_.size())); }

  void analyze(CRef confl, std::vector<Lit>& out_learnt, int32_t& out_btlevel);
  bool lit_redundant(Lit p, uint32_t abstract_levels);
  void analyze_final(Lit p);

  void var_bump(Var v);
  void var_decay() { var_inc_ /= 0.95; }
  void cla_bump(CRef c);
  void cla_decay() { cla_inc_ /= 0.999; }

  void heap_insert(Var v);
  void heap_update_up(int32_t i);
  void heap_update_down(int32_t i);
  Var heap_pop();
  bool heap_lt(Var a, Var b) const {
    return activity_[a] > activity_[b] ||
           (activity_[a] == activity_[b] && a < b);
  }

  Lit pick_branch();
  void reduce_db();
  Status search(int64_t conflict_cap);
  void dump_dimacs(std::span<const Lit> assumptions) const;
};

// The transition relation of a netlist loaded into a solver: Tseitin
// clauses for the combinational cones feeding latches and outputs, a
// primed variable per latch tied to its next-state function, and a
// retractable-clause facility for frame and query management. Primed
// cones of arbitrary literals (for "bad in the next state" queries) are
// built lazily.
class SolverInstance {
 public:
  static SolverInstance load_transition(const aig::Netlist& netlist);

  const aig::Netlist& netlist() const { return *netlist_; }

  // Solver literal of an unprimed netlist literal (loads its cone on
  // first use).
  Lit lit_cur(aig::Lit l);
  // Solver literal of a latch in the next state.
  Lit lit_next(uint32_t latch_var);
  // Solver literal of an arbitrary netlist literal evaluated over the
  // next state (primed inputs are fresh variables).
  Lit lit_primed(aig::Lit l);

  Var new_free_var() { return solver_.new_var(); }

  Status solve(std::span<const Lit> assumptions);
  bool model_value(Lit l) const { return solver_.model_value(l); }
  const std::vector<Lit>& failed_assumptions() const {
    return solver_.failed_assumptions();
  }

  bool add_clause(std::vector<Lit> lits) {
    return solver_.add_clause(std::move(lits));
  }
  ClauseHandle add_retractable(std::vector<Lit> lits) {
    return solver_.add_retractable(std::move(lits));
  }
  void retract(ClauseHandle h) { solver_.retract(h); }

  void set_conflict_budget(int64_t b) { solver_.set_conflict_budget(b); }
  void set_dimacs_prefix(std::string p) {
    solver_.set_dimacs_prefix(std::move(p));
  }
  uint64_t num_solves() const { return solver_.num_solves(); }

  // Model extraction helpers (valid after Sat).
  std::vector<aig::Lit> model_latch_cube() const;
  std::vector<bool> model_inputs() const;
  std::vector<bool> model_primed_inputs() const;

  // Solver literal of the primed copy of the input at a given position,
  // if that copy exists (it is created lazily by primed-cone loading).
  std::optional<Lit> primed_input(size_t position) const {
    Var v = primed_vars_[netlist_->inputs()[position]];
    if (v < 0) return std::nullopt;
    return mk_lit(v);
  }

 private:
  explicit SolverInstance(const aig::Netlist& netlist);

  Lit ensure_cur(uint32_t var);
  Lit ensure_primed(uint32_t var);

  const aig::Netlist* netlist_;
  Solver solver_;
  Var true_var_;
  std::vector<Var> cur_vars_;     // per netlist var; -1 = not loaded
  std::vector<Var> primed_vars_;  // per netlist var; -1 = not built
};

}  // namespace hintmc::sat

#endif
