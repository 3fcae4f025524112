#include "hintmc/pdr.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hintmc::pdr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<aig::Lit> canonical(std::vector<aig::Lit> ls) {
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  return ls;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Proof:
      return "proof";
    case Verdict::Counterexample:
      return "counterexample";
    case Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

bool is_tautology(const Clause& c) {
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i].var() == c[i - 1].var() && c[i] != c[i - 1]) return true;
  return false;
}

// ---------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------

PdrEngine::PdrEngine(const aig::Netlist& netlist, size_t target_output)
    : netlist_(netlist),
      target_(target_output),
      bad_lit_(netlist.outputs().at(target_output)),
      solver_(sat::SolverInstance::load_transition(netlist)) {
  bad_cur_ = solver_.lit_cur(bad_lit_);
  bad_primed_ = solver_.lit_primed(bad_lit_);
  init_act_ = solver_.new_free_var();
  for (const aig::Latch& l : netlist_.latches())
    solver_.add_clause({sat::mk_lit(init_act_, true),
                        ~solver_.lit_cur(aig::Lit::make(l.var))});
  frame_acts_.push_back(-1);  // level 0 is INIT, no activation literal
  blocked_.emplace_back();
}

sat::Status PdrEngine::solve_counted(std::span<const sat::Lit> assumptions) {
  ++stats_.sat_queries;
  sat::Status st = solver_.solve(assumptions);
  if (st == sat::Status::Unknown)
    throw std::logic_error("solver budget exhausted inside pdr");
  return st;
}

std::vector<sat::Lit> PdrEngine::frame_assumptions(uint32_t level) const {
  std::vector<sat::Lit> assumps;
  if (level == 0) {
    assumps.push_back(sat::mk_lit(init_act_));
    return assumps;
  }
  for (uint32_t k = level; k < frame_acts_.size(); ++k)
    assumps.push_back(sat::mk_lit(frame_acts_[k]));
  return assumps;
}

void PdrEngine::ensure_frame(uint32_t level) {
  while (frame_acts_.size() <= level) {
    sat::Var act = solver_.new_free_var();
    // The property is a member clause of every frame beyond INIT.
    solver_.add_clause({sat::mk_lit(act, true), ~bad_cur_});
    frame_acts_.push_back(act);
    blocked_.emplace_back();
  }
}

void PdrEngine::add_blocked_cube(uint32_t level, const Cube& cube) {
  ensure_frame(level);
  auto [it, fresh] = blocked_[level].insert(cube);
  if (!fresh) return;
  std::vector<sat::Lit> cls{sat::mk_lit(frame_acts_[level], true)};
  for (aig::Lit l : cube) cls.push_back(~solver_.lit_cur(l));
  solver_.add_clause(std::move(cls));
  ++stats_.clauses_learned;
}

sat::Status PdrEngine::consecution(uint32_t level, const Cube& cube,
                                   Cube* core, size_t* pred_state,
                                   size_t succ_state) {
  std::vector<sat::Lit> assumps = frame_assumptions(level);
  std::vector<sat::Lit> not_cube;
  not_cube.reserve(cube.size());
  for (aig::Lit l : cube) not_cube.push_back(~solver_.lit_cur(l));
  sat::ClauseHandle h = solver_.add_retractable(std::move(not_cube));
  std::vector<sat::Lit> primed;
  primed.reserve(cube.size());
  for (aig::Lit l : cube) {
    sat::Lit nl = solver_.lit_next(l.var());
    primed.push_back(l.negated() ? ~nl : nl);
    assumps.push_back(primed.back());
  }
  sat::Status st = solve_counted(assumps);
  if (st == sat::Status::Unsat && core) {
    const std::vector<sat::Lit>& failed = solver_.failed_assumptions();
    core->clear();
    for (size_t i = 0; i < cube.size(); ++i)
      if (std::find(failed.begin(), failed.end(), primed[i]) != failed.end())
        core->push_back(cube[i]);
    if (!excludes_init(*core)) *core = cube;
  }
  if (st == sat::Status::Sat && pred_state)
    *pred_state = extract_state(succ_state);
  solver_.retract(h);
  return st;
}

size_t PdrEngine::extract_state(size_t succ_state) {
  State st;
  st.latches = solver_.model_latch_cube();
  std::sort(st.latches.begin(), st.latches.end());
  st.inputs = solver_.model_inputs();
  st.succ = succ_state;
  if (succ_state == SIZE_MAX) st.bad_inputs = solver_.model_primed_inputs();
  states_.push_back(std::move(st));
  return lift_state(states_.size() - 1);
}

// Shrinks the raw model state to a cube whose every member reaches the
// successor under the recorded inputs: s & i & Tr & ~succ' is
// unsatisfiable and the failed assumptions select the relevant latches.
size_t PdrEngine::lift_state(size_t raw_state) {
  State& s = states_[raw_state];
  std::vector<sat::Lit> block;
  if (s.succ == SIZE_MAX) {
    block.push_back(~bad_primed_);
  } else {
    for (aig::Lit l : states_[s.succ].latches) {
      sat::Lit nl = solver_.lit_next(l.var());
      block.push_back(l.negated() ? nl : ~nl);
    }
  }
  sat::ClauseHandle h = solver_.add_retractable(std::move(block));

  std::vector<sat::Lit> assumps;
  const auto& input_vars = netlist_.inputs();
  for (size_t i = 0; i < input_vars.size(); ++i)
    assumps.push_back(
        solver_.lit_cur(aig::Lit::make(input_vars[i], !s.inputs[i])));
  if (s.succ == SIZE_MAX) {
    for (size_t i = 0; i < input_vars.size(); ++i)
      if (auto pl = solver_.primed_input(i))
        assumps.push_back(s.bad_inputs[i] ? *pl : ~*pl);
  }
  std::vector<sat::Lit> latch_assumps;
  latch_assumps.reserve(s.latches.size());
  for (aig::Lit l : s.latches) {
    latch_assumps.push_back(solver_.lit_cur(l));
    assumps.push_back(latch_assumps.back());
  }
  sat::Status st = solve_counted(assumps);
  if (st != sat::Status::Unsat)
    throw std::logic_error("state lifting query was not unsatisfiable");
  const std::vector<sat::Lit>& failed = solver_.failed_assumptions();
  Cube lifted;
  for (size_t i = 0; i < s.latches.size(); ++i)
    if (std::find(failed.begin(), failed.end(), latch_assumps[i]) !=
        failed.end())
      lifted.push_back(s.latches[i]);
  s.latches = std::move(lifted);
  solver_.retract(h);
  return raw_state;
}

Clause PdrEngine::generalize(Cube cube, uint32_t level) {
  assert(level >= 1);
  size_t i = 0;
  while (cube.size() > 1 && i < cube.size()) {
    Cube cand;
    cand.reserve(cube.size() - 1);
    for (size_t k = 0; k < cube.size(); ++k)
      if (k != i) cand.push_back(cube[k]);
    if (!excludes_init(cand)) {
      ++i;
      continue;
    }
    Cube core;
    if (consecution(level - 1, cand, &core, nullptr, 0) ==
        sat::Status::Unsat) {
      cube = std::move(core);
      // keep scanning from the same position in the shrunk cube
    } else {
      ++stats_.ctgs;  // the model is a counterexample to generalization
      ++i;
    }
  }
  return negate_lits(cube);
}

PdrEngine::StepResult PdrEngine::handle_obligations(ObligationQueue& queue) {
  while (!queue.empty()) {
    if (deadline_ < kNoTimeout) timeout_flag_ = timeout_flag_ || deadline_passed();
    Obligation obl = queue.top();
    State& s = states_[obl.state];
    if (!excludes_init(s.latches)) {
      // The cube covers the initial state: the recorded chain replays
      // from reset straight to the violation.
      cex_trace_ = build_trace(obl.state);
      return StepResult::CexFound;
    }
    Cube core;
    size_t pred = SIZE_MAX;
    sat::Status st =
        consecution(obl.level, s.latches, &core, &pred, obl.state);
    if (st == sat::Status::Unsat) {
      queue.pop();
      Cube cube = negate_lits(generalize(std::move(core), obl.level + 1));
      std::sort(cube.begin(), cube.end());
      uint32_t j = obl.level + 1;
      while (j <= frontier_ &&
             consecution(j, cube, nullptr, nullptr, 0) == sat::Status::Unsat)
        ++j;
      add_blocked_cube(j, cube);
      if (j <= frontier_)
        queue.push({j, timestamp_counter_++, obl.state});
    } else if (obl.level == 0) {
      // Predecessor is the initial state: a full trace exists.
      cex_trace_ = build_trace(pred);
      return StepResult::CexFound;
    } else {
      ++stats_.ctis;
      cti_log_.push_back(
          {obl.level - 1, states_[pred].latches, timestamp_counter_++});
      queue.push({obl.level - 1, timestamp_counter_++, pred});
    }
  }
  return StepResult::Blocked;
}

PdrEngine::StepResult PdrEngine::strengthen() {
  while (true) {
    std::vector<sat::Lit> assumps = frame_assumptions(frontier_);
    assumps.push_back(bad_primed_);
    if (solve_counted(assumps) == sat::Status::Unsat)
      return StepResult::Blocked;
    size_t s = extract_state(SIZE_MAX);
    ++stats_.ctis;
    cti_log_.push_back(
        {frontier_ - 1, states_[s].latches, timestamp_counter_++});
    ObligationQueue queue;
    queue.push({frontier_ - 1, timestamp_counter_++, s});
    if (handle_obligations(queue) == StepResult::CexFound)
      return StepResult::CexFound;
    states_.clear();
  }
}

bool PdrEngine::propagate(uint32_t* fixpoint_level) {
  // Exact-duplicate cleanup: a cube recorded at a higher level subsumes
  // its copy at a lower one.
  std::set<Cube> seen;
  for (uint32_t lev = static_cast<uint32_t>(blocked_.size()); lev-- > 1;) {
    for (auto it = blocked_[lev].begin(); it != blocked_[lev].end();) {
      if (lev + 1 < blocked_.size() && seen.count(*it))
        it = blocked_[lev].erase(it);
      else
        ++it;
    }
    seen.insert(blocked_[lev].begin(), blocked_[lev].end());
  }

  for (uint32_t lev = 1; lev <= frontier_; ++lev) {
    std::vector<Cube> snapshot(blocked_[lev].begin(), blocked_[lev].end());
    for (const Cube& cube : snapshot) {
      Cube core;
      if (consecution(lev, cube, &core, nullptr, 0) == sat::Status::Unsat) {
        blocked_[lev].erase(cube);
        add_blocked_cube(lev + 1, core);
      }
    }
    if (blocked_[lev].empty()) {
      *fixpoint_level = lev;
      return true;
    }
  }
  return false;
}

std::vector<Clause> PdrEngine::collect_invariant(
    uint32_t fixpoint_level) const {
  std::vector<Clause> clauses;
  for (uint32_t lev = fixpoint_level + 1; lev < blocked_.size(); ++lev)
    for (const Cube& cube : blocked_[lev])
      clauses.push_back(negate_lits(cube));
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  return clauses;
}

// Three-condition check of the extracted invariant (jointly with the
// property): initiation per clause, consecution per conjunct, property
// implication. Failure is an internal soundness error.
void PdrEngine::verify_invariant_or_abort(const std::vector<Clause>& clauses) {
  // Initiation, checked before asserting the invariant itself.
  for (const Clause& c : clauses) {
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act_)};
    for (aig::Lit l : c) assumps.push_back(~solver_.lit_cur(l));
    if (solve_counted(assumps) != sat::Status::Unsat)
      throw std::logic_error("invariant clause fails INIT -> c");
  }
  {
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act_), bad_cur_};
    if (solve_counted(assumps) != sat::Status::Unsat)
      throw std::logic_error("initial state violates the property");
  }
  std::vector<sat::ClauseHandle> handles;
  for (const Clause& c : clauses) {
    std::vector<sat::Lit> cls;
    for (aig::Lit l : c) cls.push_back(solver_.lit_cur(l));
    handles.push_back(solver_.add_retractable(std::move(cls)));
  }
  handles.push_back(solver_.add_retractable({~bad_cur_}));
  bool ok = true;
  std::string fail;
  for (const Clause& c : clauses) {
    std::vector<sat::Lit> assumps;
    for (aig::Lit l : c) {
      sat::Lit nl = solver_.lit_next(l.var());
      assumps.push_back(l.negated() ? nl : ~nl);
    }
    if (solve_counted(assumps) != sat::Status::Unsat) {
      ok = false;
      fail = "invariant clause fails INV & Tr -> c'";
      break;
    }
  }
  if (ok && solve_counted(std::vector<sat::Lit>{bad_primed_}) !=
                sat::Status::Unsat) {
    ok = false;
    fail = "invariant fails INV & Tr -> P'";
  }
  if (ok && solve_counted(std::vector<sat::Lit>{bad_cur_}) !=
                sat::Status::Unsat) {
    ok = false;
    fail = "invariant fails INV -> P";
  }
  for (sat::ClauseHandle h : handles) solver_.retract(h);
  if (!ok) throw std::logic_error(fail);
}

Trace PdrEngine::build_trace(size_t first_state) const {
  Trace trace;
  size_t idx = first_state;
  while (true) {
    trace.push_back(states_[idx].inputs);
    if (states_[idx].succ == SIZE_MAX) {
      trace.push_back(states_[idx].bad_inputs);
      break;
    }
    idx = states_[idx].succ;
  }
  return trace;
}

Checkpoint PdrEngine::make_checkpoint() const {
  Checkpoint ckpt;
  ckpt.netlist_hash = netlist_.hash();
  ckpt.latch_count = static_cast<uint32_t>(netlist_.num_latches());
  ckpt.target_output = static_cast<uint32_t>(target_);
  ckpt.frontier = frontier_;
  ckpt.blocked.resize(blocked_.size());
  for (size_t lev = 1; lev < blocked_.size(); ++lev)
    ckpt.blocked[lev].assign(blocked_[lev].begin(), blocked_[lev].end());
  ckpt.cti_log = cti_log_;
  ckpt.stats = stats_;
  ckpt.stats.frames = frontier_;
  ckpt.stats.elapsed = seconds_since(run_start_);
  return ckpt;
}

void PdrEngine::restore(const Checkpoint& ckpt) {
  if (ckpt.netlist_hash != netlist_.hash() ||
      ckpt.latch_count != netlist_.num_latches())
    throw std::runtime_error(
        "checkpoint does not match the netlist (latch count or symbol hash "
        "differs)");
  if (ckpt.target_output != target_)
    throw std::runtime_error("checkpoint was produced for another target");
  if (frontier_ != 0)
    throw std::logic_error("restore requires a fresh engine");
  for (size_t lev = 1; lev < ckpt.blocked.size(); ++lev)
    for (const Cube& cube : ckpt.blocked[lev])
      add_blocked_cube(static_cast<uint32_t>(lev), cube);
  frontier_ = ckpt.frontier + 1;
  ensure_frame(frontier_ + 1);
  stats_.clauses_learned = 0;  // restored clauses are not new learning
}

SideloadReport PdrEngine::sideload(std::span<const Clause> clauses) {
  SideloadReport report;
  ensure_frame(1);
  std::set<Clause> installed;
  for (const Clause& raw : clauses) {
    Clause c = canonical(raw);
    for (aig::Lit l : c)
      if (!netlist_.is_latch(l.var()))
        throw std::invalid_argument(
            "side-load clause mentions a non-latch variable");
    if (is_tautology(c)) {
      report.accepted.push_back(c);
      continue;  // nothing to install
    }
    if (installed.count(c)) continue;
    // (a) INIT -> c
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act_)};
    for (aig::Lit l : c) assumps.push_back(~solver_.lit_cur(l));
    if (solve_counted(assumps) != sat::Status::Unsat) {
      report.rejected.push_back({c, "init"});
      continue;
    }
    // (b) INIT & Tr -> c'
    assumps.assign({sat::mk_lit(init_act_)});
    for (aig::Lit l : c) {
      sat::Lit nl = solver_.lit_next(l.var());
      assumps.push_back(l.negated() ? nl : ~nl);
    }
    if (solve_counted(assumps) != sat::Status::Unsat) {
      report.rejected.push_back({c, "step"});
      continue;
    }
    installed.insert(c);
    report.accepted.push_back(c);
    Cube cube = negate_lits(c);
    std::sort(cube.begin(), cube.end());
    add_blocked_cube(1, cube);
  }
  return report;
}

bool PdrEngine::deadline_passed() const {
  return deadline_ < kNoTimeout && seconds_since(run_start_) > deadline_;
}

ProveResult PdrEngine::run(double timeout_sec) {
  run_start_ = Clock::now();
  deadline_ = timeout_sec;
  timeout_flag_ = false;
  ProveResult res;

  auto finalize = [&](Verdict v) {
    res.verdict = v;
    stats_.frames = frontier_;
    stats_.elapsed = seconds_since(run_start_);
    res.stats = stats_;
    res.cti_log = cti_log_;
    return res;
  };

  // 0- and 1-step base cases.
  {
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act_), bad_cur_};
    if (solve_counted(assumps) == sat::Status::Sat) {
      res.trace = {solver_.model_inputs()};
      return finalize(Verdict::Counterexample);
    }
    assumps.assign({sat::mk_lit(init_act_), bad_primed_});
    if (solve_counted(assumps) == sat::Status::Sat) {
      res.trace = {solver_.model_inputs(), solver_.model_primed_inputs()};
      return finalize(Verdict::Counterexample);
    }
  }

  if (frontier_ == 0) frontier_ = 1;
  ensure_frame(frontier_ + 1);

  while (true) {
    if (strengthen() == StepResult::CexFound) {
      res.trace = std::move(*cex_trace_);
      cex_trace_.reset();
      states_.clear();
      return finalize(Verdict::Counterexample);
    }
    uint32_t fixpoint_level = 0;
    if (propagate(&fixpoint_level)) {
      std::vector<Clause> clauses = collect_invariant(fixpoint_level);
      verify_invariant_or_abort(clauses);
      res.invariant = std::move(clauses);
      return finalize(Verdict::Proof);
    }
    if (timeout_flag_ || deadline_passed()) {
      res.checkpoint = make_checkpoint();
      return finalize(Verdict::Unknown);
    }
    ++frontier_;
    ensure_frame(frontier_ + 1);
  }
}

bool PdrEngine::validate_frames(std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  // F_i -> P. Beyond INIT this is structural (the property clause is a
  // member of every frame); for INIT it is the 0-step base case.
  {
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act_), bad_cur_};
    if (solve_counted(assumps) != sat::Status::Unsat)
      return fail("INIT does not imply the property");
  }
  // F_i & Tr -> F_{i+1}' for every completed frame boundary, checked
  // clause by clause; the P' component is included for each level.
  uint32_t top = static_cast<uint32_t>(blocked_.size()) - 1;
  for (uint32_t i = 0; i + 1 <= top && i < frontier_; ++i) {
    for (uint32_t lev = i + 1; lev <= top; ++lev) {
      for (const Cube& cube : blocked_[lev]) {
        std::vector<sat::Lit> assumps = frame_assumptions(i);
        for (aig::Lit l : cube) {
          sat::Lit nl = solver_.lit_next(l.var());
          assumps.push_back(l.negated() ? ~nl : nl);
        }
        if (solve_counted(assumps) != sat::Status::Unsat)
          return fail("clause at level " + std::to_string(lev) +
                      " is not implied one step from F_" + std::to_string(i));
      }
    }
    std::vector<sat::Lit> assumps = frame_assumptions(i);
    assumps.push_back(bad_primed_);
    if (solve_counted(assumps) != sat::Status::Unsat)
      return fail("F_" + std::to_string(i) + " & Tr does not imply P'");
  }
  return true;
}

// ---------------------------------------------------------------------
// Free functions
// ---------------------------------------------------------------------

ProveResult pdr(const aig::Netlist& netlist, size_t target_output,
                double timeout_sec, std::span<const Clause> sideload,
                const Checkpoint* checkpoint) {
  PdrEngine engine(netlist, target_output);
  if (checkpoint) engine.restore(*checkpoint);
  SideloadReport report;
  if (!sideload.empty()) report = engine.sideload(sideload);
  ProveResult res = engine.run(timeout_sec);
  res.sideload = std::move(report);
  return res;
}

SideloadReport validate_sideload(const aig::Netlist& netlist,
                                 std::span<const Clause> clauses) {
  sat::SolverInstance solver = sat::SolverInstance::load_transition(netlist);
  sat::Var init_act = solver.new_free_var();
  for (const aig::Latch& l : netlist.latches())
    solver.add_clause(
        {sat::mk_lit(init_act, true), ~solver.lit_cur(aig::Lit::make(l.var))});
  SideloadReport report;
  for (const Clause& raw : clauses) {
    Clause c = canonical(raw);
    for (aig::Lit l : c)
      if (!netlist.is_latch(l.var()))
        throw std::invalid_argument(
            "side-load clause mentions a non-latch variable");
    if (is_tautology(c)) {
      report.accepted.push_back(c);
      continue;
    }
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act)};
    for (aig::Lit l : c) assumps.push_back(~solver.lit_cur(l));
    if (solver.solve(assumps) != sat::Status::Unsat) {
      report.rejected.push_back({c, "init"});
      continue;
    }
    assumps.assign({sat::mk_lit(init_act)});
    for (aig::Lit l : c) {
      sat::Lit nl = solver.lit_next(l.var());
      assumps.push_back(l.negated() ? nl : ~nl);
    }
    if (solver.solve(assumps) != sat::Status::Unsat) {
      report.rejected.push_back({c, "step"});
      continue;
    }
    report.accepted.push_back(c);
  }
  return report;
}

bool verify_invariant(const aig::Netlist& netlist, size_t target_output,
                      std::span<const Clause> clauses, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  sat::SolverInstance solver = sat::SolverInstance::load_transition(netlist);
  aig::Lit bad = netlist.outputs().at(target_output);
  sat::Lit bad_cur = solver.lit_cur(bad);
  sat::Lit bad_primed = solver.lit_primed(bad);
  sat::Var init_act = solver.new_free_var();
  for (const aig::Latch& l : netlist.latches())
    solver.add_clause(
        {sat::mk_lit(init_act, true), ~solver.lit_cur(aig::Lit::make(l.var))});

  for (const Clause& c : clauses) {
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act)};
    for (aig::Lit l : c) assumps.push_back(~solver.lit_cur(l));
    if (solver.solve(assumps) != sat::Status::Unsat)
      return fail("INIT -> c fails");
  }
  {
    std::vector<sat::Lit> assumps{sat::mk_lit(init_act), bad_cur};
    if (solver.solve(assumps) != sat::Status::Unsat)
      return fail("INIT -> P fails");
  }
  for (const Clause& c : clauses) {
    std::vector<sat::Lit> cls;
    for (aig::Lit l : c) cls.push_back(solver.lit_cur(l));
    solver.add_clause(std::move(cls));
  }
  solver.add_clause({~bad_cur});
  for (const Clause& c : clauses) {
    std::vector<sat::Lit> assumps;
    for (aig::Lit l : c) {
      sat::Lit nl = solver.lit_next(l.var());
      assumps.push_back(l.negated() ? nl : ~nl);
    }
    if (solver.solve(assumps) != sat::Status::Unsat)
      return fail("INV & Tr -> c' fails");
  }
  if (solver.solve(std::vector<sat::Lit>{bad_primed}) != sat::Status::Unsat)
    return fail("INV & Tr -> P' fails");
  return true;
}

bool replays_to_bad(const aig::Netlist& netlist, size_t target_output,
                    const Trace& trace) {
  std::vector<aig::SimStep> steps = netlist.simulate(trace);
  return !steps.empty() && steps.back().outputs.at(target_output);
}

std::string clauses_to_text(const aig::Netlist& netlist,
                            std::span<const Clause> clauses) {
  std::ostringstream out;
  for (const Clause& c : clauses) {
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) out << ' ';
      if (c[i].negated()) out << '-';
      out << netlist.name_of_latch(c[i].var());
    }
    out << '\n';
  }
  return out.str();
}

std::vector<Clause> clauses_from_text(const aig::Netlist& netlist,
                                      std::string_view text) {
  std::vector<Clause> clauses;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    Clause c;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      bool neg = tok[0] == '-';
      std::string name = neg ? tok.substr(1) : tok;
      auto var = netlist.find_latch(name);
      if (!var)
        throw std::runtime_error("clause file references unknown latch '" +
                                 name + "'");
      c.push_back(aig::Lit::make(*var, neg));
    }
    if (!c.empty()) clauses.push_back(canonical(c));
  }
  return clauses;
}

std::string trace_to_text(const Trace& trace) {
  std::ostringstream out;
  for (const auto& step : trace) {
    for (bool b : step) out << (b ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

Trace trace_from_text(std::string_view text, size_t num_inputs) {
  Trace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    if (line.size() != num_inputs)
      throw std::runtime_error("trace line arity mismatch");
    std::vector<bool> step;
    for (char ch : line) {
      if (ch != '0' && ch != '1')
        throw std::runtime_error("trace line contains non-binary character");
      step.push_back(ch == '1');
    }
    trace.push_back(std::move(step));
  }
  return trace;
}

// ---------------------------------------------------------------------
// Checkpoint serialization
// ---------------------------------------------------------------------

std::string Checkpoint::to_json() const {
  nlohmann::json j;
  j["version"] = 1;
  j["netlist_hash"] = netlist_hash;
  j["latch_count"] = latch_count;
  j["target_output"] = target_output;
  j["frontier"] = frontier;
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& level : blocked) {
    nlohmann::json cubes = nlohmann::json::array();
    for (const Cube& cube : level) {
      nlohmann::json lits = nlohmann::json::array();
      for (aig::Lit l : cube) lits.push_back(l.code());
      cubes.push_back(std::move(lits));
    }
    levels.push_back(std::move(cubes));
  }
  j["blocked"] = std::move(levels);
  nlohmann::json log = nlohmann::json::array();
  for (const Cti& cti : cti_log) {
    nlohmann::json lits = nlohmann::json::array();
    for (aig::Lit l : cti.cube) lits.push_back(l.code());
    log.push_back({{"level", cti.level},
                   {"timestamp", cti.timestamp},
                   {"cube", std::move(lits)}});
  }
  j["cti_log"] = std::move(log);
  j["stats"] = {{"sat_queries", stats.sat_queries},
                {"ctis", stats.ctis},
                {"ctgs", stats.ctgs},
                {"clauses_learned", stats.clauses_learned},
                {"frames", stats.frames},
                {"elapsed", stats.elapsed}};
  return j.dump(2);
}

Checkpoint Checkpoint::from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("version").get<int>() != 1)
    throw std::runtime_error("unsupported checkpoint version");
  Checkpoint ckpt;
  ckpt.netlist_hash = j.at("netlist_hash").get<uint64_t>();
  ckpt.latch_count = j.at("latch_count").get<uint32_t>();
  ckpt.target_output = j.at("target_output").get<uint32_t>();
  ckpt.frontier = j.at("frontier").get<uint32_t>();
  for (const auto& level : j.at("blocked")) {
    std::vector<Cube> cubes;
    for (const auto& lits : level) {
      Cube cube;
      for (const auto& code : lits)
        cube.push_back(aig::Lit::from_code(code.get<uint32_t>()));
      cubes.push_back(std::move(cube));
    }
    ckpt.blocked.push_back(std::move(cubes));
  }
  for (const auto& entry : j.at("cti_log")) {
    Cti cti;
    cti.level = entry.at("level").get<uint32_t>();
    cti.timestamp = entry.at("timestamp").get<uint64_t>();
    for (const auto& code : entry.at("cube"))
      cti.cube.push_back(aig::Lit::from_code(code.get<uint32_t>()));
    ckpt.cti_log.push_back(std::move(cti));
  }
  const auto& st = j.at("stats");
  ckpt.stats.sat_queries = st.at("sat_queries").get<uint64_t>();
  ckpt.stats.ctis = st.at("ctis").get<uint64_t>();
  ckpt.stats.ctgs = st.at("ctgs").get<uint64_t>();
  ckpt.stats.clauses_learned = st.at("clauses_learned").get<uint64_t>();
  ckpt.stats.frames = st.at("frames").get<uint32_t>();
  ckpt.stats.elapsed = st.at("elapsed").get<double>();
  return ckpt;
}

}  // namespace hintmc::pdr
