#include "hintmc/sat.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <fstream>

namespace hintmc::sat {

namespace {

// Luby restart sequence (finite-state version).
double luby(double y, int x) {
  int size, seq;
  for (size = 1, seq = 0; size < x + 1; ++seq, size = 2 * size + 1) {
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

Solver::Solver() = default;

float Solver::clause_act(CRef c) const {
  return std::bit_cast<float>(mem_[c + 1].x);
}

void Solver::set_clause_act(CRef c, float f) {
  mem_[c + 1].x = std::bit_cast<int32_t>(f);
}

Var Solver::new_var() {
  Var v = static_cast<Var>(assigns_.size());
  assigns_.push_back(0);
  model_.push_back(0);
  polarity_.push_back(1);  // prefer false: matches the all-zero reset state
  level_.push_back(0);
  reason_.push_back(kNoReason);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  is_act_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

Solver::CRef Solver::alloc_clause(std::span<const Lit> lits, bool learnt) {
  CRef c = static_cast<CRef>(mem_.size());
  Lit header;
  header.x = static_cast<int32_t>(static_cast<uint32_t>(lits.size()) |
                                  (learnt ? 0x80000000u : 0u));
  mem_.push_back(header);
  if (learnt) {
    Lit act;
    act.x = std::bit_cast<int32_t>(0.0f);
    mem_.push_back(act);
  }
  for (Lit l : lits) mem_.push_back(l);
  return c;
}

void Solver::attach_clause(CRef c) {
  const Lit* ls = clause_lits(c);
  assert(clause_size(c) >= 2);
  watches_[(~ls[0]).x].push_back({c, ls[1]});
  watches_[(~ls[1]).x].push_back({c, ls[0]});
}

void Solver::detach_clause(CRef c) {
  const Lit* ls = clause_lits(c);
  for (int i = 0; i < 2; ++i) {
    auto& ws = watches_[(~ls[i]).x];
    for (size_t j = 0; j < ws.size(); ++j)
      if (ws[j].cref == c) {
        ws[j] = ws.back();
        ws.pop_back();
        break;
      }
  }
}

bool Solver::add_clause(std::vector<Lit> lits) {
  assert(decision_level() == 0);
  if (!ok_) return false;
  std::sort(lits.begin(), lits.end());
  size_t j = 0;
  Lit prev;
  bool have_prev = false;
  for (size_t i = 0; i < lits.size(); ++i) {
    if (have_prev && lits[i] == ~prev) return true;  // tautology
    if (have_prev && lits[i] == prev) continue;
    prev = lits[i];
    have_prev = true;
    if (value(lits[i]) == 1) return true;   // satisfied at root level
    if (value(lits[i]) == -1) continue;     // false at root level: drop
    lits[j++] = lits[i];
  }
  lits.resize(j);
  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    unchecked_enqueue(lits[0], kNoReason);
    ok_ = (propagate() == kNoReason);
    return ok_;
  }
  CRef c = alloc_clause(lits, false);
  originals_.push_back(c);
  attach_clause(c);
  return true;
}

ClauseHandle Solver::add_retractable(std::vector<Lit> lits) {
  Var act = new_var();
  is_act_[act] = 1;
  lits.push_back(mk_lit(act, true));
  add_clause(std::move(lits));
  active_acts_.push_back(act);
  return act;
}

void Solver::retract(ClauseHandle h) {
  auto it = std::find(active_acts_.begin(), active_acts_.end(), h);
  assert(it != active_acts_.end());
  active_acts_.erase(it);
  add_clause({mk_lit(h, true)});
}

void Solver::unchecked_enqueue(Lit p, CRef from) {
  assert(value(p) == 0);
  assigns_[p.var()] = p.sign() ? -1 : 1;
  level_[p.var()] = decision_level();
  reason_[p.var()] = from;
  trail_.push_back(p);
}

Solver::CRef Solver::propagate() {
  CRef confl = kNoReason;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    ++stats_propagations_;
    auto& ws = watches_[p.x];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      CRef c = w.cref;
      Lit* ls = clause_lits(c);
      Lit false_lit = ~p;
      if (ls[0] == false_lit) std::swap(ls[0], ls[1]);
      assert(ls[1] == false_lit);
      ++i;
      Lit first = ls[0];
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = {c, first};
        continue;
      }
      uint32_t n = clause_size(c);
      bool moved = false;
      for (uint32_t k = 2; k < n; ++k) {
        if (value(ls[k]) != -1) {
          std::swap(ls[1], ls[k]);
          watches_[(~ls[1]).x].push_back({c, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {c, first};
      if (value(first) == -1) {
        confl = c;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        unchecked_enqueue(first, c);
      }
    }
    ws.resize(j);
  }
  return confl;
}

void Solver::cancel_until(int32_t level) {
  if (decision_level() <= level) return;
  for (size_t c = trail_.size(); c-- > static_cast<size_t>(trail_lim_[level]);) {
    Var v = trail_[c].var();
    assigns_[v] = 0;
    polarity_[v] = trail_[c].sign() ? 1 : 0;
    if (heap_pos_[v] == -1) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

void Solver::var_bump(Var v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_update_up(heap_pos_[v]);
}

void Solver::cla_bump(CRef c) {
  float a = clause_act(c) + static_cast<float>(cla_inc_);
  set_clause_act(c, a);
  if (a > 1e20f) {
    for (CRef lc : learnts_) set_clause_act(lc, clause_act(lc) * 1e-20f);
    cla_inc_ *= 1e-20;
  }
}

void Solver::heap_insert(Var v) {
  heap_pos_[v] = static_cast<int32_t>(heap_.size());
  heap_.push_back(v);
  heap_update_up(heap_pos_[v]);
}

void Solver::heap_update_up(int32_t i) {
  Var v = heap_[i];
  while (i > 0) {
    int32_t parent = (i - 1) >> 1;
    if (!heap_lt(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = i;
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_update_down(int32_t i) {
  Var v = heap_[i];
  int32_t n = static_cast<int32_t>(heap_.size());
  while (true) {
    int32_t child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_lt(heap_[child + 1], heap_[child])) ++child;
    if (!heap_lt(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = i;
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

Var Solver::heap_pop() {
  Var v = heap_[0];
  heap_pos_[v] = -1;
  heap_[0] = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_pos_[heap_[0]] = 0;
    heap_update_down(0);
  }
  return v;
}

Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    Var v = heap_pop();
    if (assigns_[v] == 0) return mk_lit(v, polarity_[v] != 0);
  }
  return Lit();  // undefined: all assigned
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt,
                     int32_t& out_btlevel) {
  int path_count = 0;
  Lit p;
  bool have_p = false;
  out_learnt.clear();
  out_learnt.push_back(Lit());  // slot for the asserting literal
  size_t index = trail_.size();

  do {
    assert(confl != kNoReason);
    if (clause_learnt(confl)) cla_bump(confl);
    const Lit* ls = clause_lits(confl);
    uint32_t n = clause_size(confl);
    for (uint32_t k = have_p ? 1 : 0; k < n; ++k) {
      Lit q = ls[k];
      if (!seen_[q.var()] && level_[q.var()] > 0) {
        var_bump(q.var());
        seen_[q.var()] = 1;
        if (level_[q.var()] >= decision_level())
          ++path_count;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[trail_[--index].var()]) {
    }
    p = trail_[index];
    have_p = true;
    confl = reason_[p.var()];
    seen_[p.var()] = 0;
    --path_count;
  } while (path_count > 0);
  out_learnt[0] = ~p;

  // Conflict-clause minimization: drop literals implied by the rest.
  analyze_toclear_.assign(out_learnt.begin(), out_learnt.end());
  uint32_t abstract_levels = 0;
  for (size_t i = 1; i < out_learnt.size(); ++i)
    abstract_levels |= 1u << (level_[out_learnt[i].var()] & 31);
  size_t j = 1;
  for (size_t i = 1; i < out_learnt.size(); ++i) {
    Var v = out_learnt[i].var();
    if (reason_[v] == kNoReason ||
        !lit_redundant(out_learnt[i], abstract_levels))
      out_learnt[j++] = out_learnt[i];
  }
  out_learnt.resize(j);
  for (Lit l : analyze_toclear_) seen_[l.var()] = 0;

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    size_t max_i = 1;
    for (size_t i = 2; i < out_learnt.size(); ++i)
      if (level_[out_learnt[i].var()] > level_[out_learnt[max_i].var()])
        max_i = i;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level_[out_learnt[1].var()];
  }
}

bool Solver::lit_redundant(Lit p, uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    assert(reason_[q.var()] != kNoReason);
    CRef c = reason_[q.var()];
    const Lit* ls = clause_lits(c);
    uint32_t n = clause_size(c);
    for (uint32_t k = 1; k < n; ++k) {
      Lit r = ls[k];
      Var v = r.var();
      if (!seen_[v] && level_[v] > 0) {
        if (reason_[v] != kNoReason &&
            ((1u << (level_[v] & 31)) & abstract_levels)) {
          seen_[v] = 1;
          analyze_stack_.push_back(r);
          analyze_toclear_.push_back(r);
        } else {
          for (size_t i = top; i < analyze_toclear_.size(); ++i)
            seen_[analyze_toclear_[i].var()] = 0;
          analyze_toclear_.resize(top);
          return false;
        }
      }
    }
  }
  return true;
}

// Collects the assumption decisions responsible for the trail-implied
// literal ~p into conflict_. The failing assumption itself is added by
// the caller.
void Solver::analyze_final(Lit p) {
  conflict_.clear();
  if (decision_level() == 0) return;
  seen_[p.var()] = 1;
  for (size_t i = trail_.size(); i-- > static_cast<size_t>(trail_lim_[0]);) {
    Var v = trail_[i].var();
    if (!seen_[v]) continue;
    if (reason_[v] == kNoReason) {
      assert(level_[v] > 0);
      if (!is_act_[v]) conflict_.push_back(trail_[i]);
    } else {
      const Lit* ls = clause_lits(reason_[v]);
      uint32_t n = clause_size(reason_[v]);
      for (uint32_t k = 1; k < n; ++k)
        if (level_[ls[k].var()] > 0) seen_[ls[k].var()] = 1;
    }
    seen_[v] = 0;
  }
  seen_[p.var()] = 0;
}

void Solver::reduce_db() {
  std::vector<CRef> sorted = learnts_;
  std::sort(sorted.begin(), sorted.end(), [&](CRef a, CRef b) {
    bool a2 = clause_size(a) == 2, b2 = clause_size(b) == 2;
    if (a2 != b2) return b2;  // binary clauses sort last (always kept)
    if (clause_act(a) != clause_act(b)) return clause_act(a) < clause_act(b);
    return a < b;
  });
  double extra_lim = cla_inc_ / std::max<size_t>(learnts_.size(), 1);
  std::vector<CRef> kept;
  size_t limit = sorted.size() / 2;
  for (size_t i = 0; i < sorted.size(); ++i) {
    CRef c = sorted[i];
    Lit first = clause_lits(c)[0];
    bool locked = reason_[first.var()] == c && value(first) == 1;
    if (clause_size(c) > 2 && !locked &&
        (i < limit || clause_act(c) < extra_lim)) {
      detach_clause(c);
    } else {
      kept.push_back(c);
    }
  }
  learnts_ = std::move(kept);
}

Status Solver::search(int64_t conflict_cap) {
  int64_t conflicts_here = 0;
  std::vector<Lit> learnt;
  while (true) {
    CRef confl = propagate();
    if (confl != kNoReason) {
      ++stats_conflicts_;
      ++conflicts_here;
      if (decision_level() == 0) return Status::Unsat;
      int32_t btlevel;
      analyze(confl, learnt, btlevel);
      cancel_until(btlevel);
      if (learnt.size() == 1) {
        unchecked_enqueue(learnt[0], kNoReason);
      } else {
        CRef c = alloc_clause(learnt, true);
        learnts_.push_back(c);
        attach_clause(c);
        cla_bump(c);
        unchecked_enqueue(learnt[0], c);
      }
      var_decay();
      cla_decay();
    } else {
      if (conflicts_here >= conflict_cap) {
        cancel_until(0);
        return Status::Unknown;
      }
      if (static_cast<double>(learnts_.size()) >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      Lit next;
      bool has_next = false;
      while (decision_level() < static_cast<int32_t>(assumptions_.size())) {
        Lit p = assumptions_[decision_level()];
        if (value(p) == 1) {
          new_decision_level();
        } else if (value(p) == -1) {
          analyze_final(~p);
          if (!is_act_[p.var()]) conflict_.push_back(p);
          return Status::Unsat;
        } else {
          next = p;
          has_next = true;
          break;
        }
      }
      if (!has_next) {
        next = pick_branch();
        if (next.x < 0) return Status::Sat;  // all variables assigned
        ++stats_decisions_;
      }
      new_decision_level();
      unchecked_enqueue(next, kNoReason);
    }
  }
}

Status Solver::solve(std::span<const Lit> assumptions) {
  ++stats_solves_;
  conflict_.clear();
  if (!ok_) return Status::Unsat;

  assumptions_.clear();
  for (Var a : active_acts_) assumptions_.push_back(mk_lit(a));
  assumptions_.insert(assumptions_.end(), assumptions.begin(),
                      assumptions.end());

  if (!dimacs_prefix_.empty()) dump_dimacs(assumptions);

  max_learnts_ =
      std::max<double>(static_cast<double>(originals_.size()) * 0.3, 2000.0);
  uint64_t conflicts_before = stats_conflicts_;
  Status result = Status::Unknown;
  for (int restarts = 0;; ++restarts) {
    int64_t cap = static_cast<int64_t>(luby(2.0, restarts) * 100.0);
    if (budget_ >= 0) {
      int64_t used = static_cast<int64_t>(stats_conflicts_ - conflicts_before);
      if (used >= budget_) break;
      cap = std::min(cap, budget_ - used);
    }
    result = search(cap);
    if (result != Status::Unknown) break;
  }
  if (result == Status::Sat) model_ = assigns_;
  cancel_until(0);
  return result;
}

bool Solver::model_value(Lit l) const {
  int8_t a = model_[l.var()];
  return (l.sign() ? -a : a) == 1;
}

void Solver::dump_dimacs(std::span<const Lit> assumptions) const {
  std::ofstream out(dimacs_prefix_ + std::to_string(dimacs_counter_++) +
                    ".cnf");
  auto fmt = [](Lit l) { return l.sign() ? -(l.var() + 1) : l.var() + 1; };
  out << "c assumptions:";
  for (Var a : active_acts_) out << ' ' << (a + 1);
  for (Lit l : assumptions) out << ' ' << fmt(l);
  out << '\n';
  size_t root_units = trail_lim_.empty() ? trail_.size() : trail_lim_[0];
  out << "p cnf " << num_vars() << ' ' << (originals_.size() + root_units)
      << '\n';
  for (size_t i = 0; i < root_units; ++i) out << fmt(trail_[i]) << " 0\n";
  for (CRef c : originals_) {
    const Lit* ls = clause_lits(c);
    for (uint32_t k = 0; k < clause_size(c); ++k) out << fmt(ls[k]) << ' ';
    out << "0\n";
  }
}

// ---------------------------------------------------------------------
// SolverInstance: netlist transition relation on top of the CDCL core
// ---------------------------------------------------------------------

SolverInstance::SolverInstance(const aig::Netlist& netlist)
    : netlist_(&netlist) {
  true_var_ = solver_.new_var();
  solver_.add_clause({mk_lit(true_var_)});
  cur_vars_.assign(netlist.max_var() + 1, -1);
  primed_vars_.assign(netlist.max_var() + 1, -1);
}

SolverInstance SolverInstance::load_transition(const aig::Netlist& netlist) {
  SolverInstance inst(netlist);
  for (uint32_t v : netlist.inputs()) inst.ensure_cur(v);
  for (const aig::Latch& l : netlist.latches()) inst.ensure_cur(l.var);
  for (const aig::Latch& l : netlist.latches()) inst.ensure_cur(l.next.var());
  for (aig::Lit o : netlist.outputs()) inst.ensure_cur(o.var());
  // One primed variable per latch, tied to the next-state function.
  for (const aig::Latch& l : netlist.latches()) {
    Var pv = inst.solver_.new_var();
    inst.primed_vars_[l.var] = pv;
    Lit next = inst.lit_cur(l.next);
    inst.solver_.add_clause({mk_lit(pv, true), next});
    inst.solver_.add_clause({mk_lit(pv), ~next});
  }
  return inst;
}

Lit SolverInstance::ensure_cur(uint32_t var) {
  if (cur_vars_[var] >= 0) return mk_lit(cur_vars_[var]);
  std::vector<uint32_t> stack{var};
  while (!stack.empty()) {
    uint32_t v = stack.back();
    if (cur_vars_[v] >= 0) {
      stack.pop_back();
      continue;
    }
    switch (netlist_->kind(v)) {
      case aig::NodeKind::Constant:
        cur_vars_[v] = true_var_;  // literal translation applies the flip
        stack.pop_back();
        break;
      case aig::NodeKind::Input:
      case aig::NodeKind::Latch:
        cur_vars_[v] = solver_.new_var();
        stack.pop_back();
        break;
      case aig::NodeKind::Gate: {
        const aig::Gate& g = netlist_->gate_of(v);
        bool ready = true;
        for (uint32_t child : {g.rhs0.var(), g.rhs1.var()}) {
          if (cur_vars_[child] < 0) {
            stack.push_back(child);
            ready = false;
          }
        }
        if (!ready) break;
        Var gv = solver_.new_var();
        cur_vars_[v] = gv;
        Lit a = lit_cur(g.rhs0), b = lit_cur(g.rhs1);
        solver_.add_clause({mk_lit(gv, true), a});
        solver_.add_clause({mk_lit(gv, true), b});
        solver_.add_clause({mk_lit(gv), ~a, ~b});
        stack.pop_back();
        break;
      }
    }
  }
  return mk_lit(cur_vars_[var]);
}

Lit SolverInstance::lit_cur(aig::Lit l) {
  if (l.is_const())
    return l.is_true() ? mk_lit(true_var_) : ~mk_lit(true_var_);
  Lit s = ensure_cur(l.var());
  return l.negated() ? ~s : s;
}

Lit SolverInstance::lit_next(uint32_t latch_var) {
  assert(netlist_->is_latch(latch_var));
  assert(primed_vars_[latch_var] >= 0);
  return mk_lit(primed_vars_[latch_var]);
}

Lit SolverInstance::ensure_primed(uint32_t var) {
  if (primed_vars_[var] >= 0) return mk_lit(primed_vars_[var]);
  std::vector<uint32_t> stack{var};
  while (!stack.empty()) {
    uint32_t v = stack.back();
    if (primed_vars_[v] >= 0) {
      stack.pop_back();
      continue;
    }
    switch (netlist_->kind(v)) {
      case aig::NodeKind::Constant:
        primed_vars_[v] = true_var_;
        stack.pop_back();
        break;
      case aig::NodeKind::Input:
        primed_vars_[v] = solver_.new_var();
        stack.pop_back();
        break;
      case aig::NodeKind::Latch:
        assert(false && "latch primed variable created in load_transition");
        stack.pop_back();
        break;
      case aig::NodeKind::Gate: {
        const aig::Gate& g = netlist_->gate_of(v);
        bool ready = true;
        for (uint32_t child : {g.rhs0.var(), g.rhs1.var()}) {
          if (primed_vars_[child] < 0) {
            stack.push_back(child);
            ready = false;
          }
        }
        if (!ready) break;
        Var gv = solver_.new_var();
        primed_vars_[v] = gv;
        Lit a = lit_primed(g.rhs0), b = lit_primed(g.rhs1);
        solver_.add_clause({mk_lit(gv, true), a});
        solver_.add_clause({mk_lit(gv, true), b});
        solver_.add_clause({mk_lit(gv), ~a, ~b});
        stack.pop_back();
        break;
      }
    }
  }
  return mk_lit(primed_vars_[var]);
}

Lit SolverInstance::lit_primed(aig::Lit l) {
  if (l.is_const())
    return l.is_true() ? mk_lit(true_var_) : ~mk_lit(true_var_);
  Lit s = ensure_primed(l.var());
  return l.negated() ? ~s : s;
}

Status SolverInstance::solve(std::span<const Lit> assumptions) {
  return solver_.solve(assumptions);
}

std::vector<aig::Lit> SolverInstance::model_latch_cube() const {
  std::vector<aig::Lit> cube;
  cube.reserve(netlist_->num_latches());
  for (const aig::Latch& l : netlist_->latches()) {
    bool v = solver_.model_value(cur_vars_[l.var]);
    cube.push_back(aig::Lit::make(l.var, !v));
  }
  return cube;
}

std::vector<bool> SolverInstance::model_inputs() const {
  std::vector<bool> in(netlist_->num_inputs(), false);
  const auto& ins = netlist_->inputs();
  for (size_t i = 0; i < ins.size(); ++i)
    if (cur_vars_[ins[i]] >= 0) in[i] = solver_.model_value(cur_vars_[ins[i]]);
  return in;
}

std::vector<bool> SolverInstance::model_primed_inputs() const {
  std::vector<bool> in(netlist_->num_inputs(), false);
  const auto& ins = netlist_->inputs();
  for (size_t i = 0; i < ins.size(); ++i)
    if (primed_vars_[ins[i]] >= 0)
      in[i] = solver_.model_value(primed_vars_[ins[i]]);
  return in;
}

}  // namespace hintmc::sat
