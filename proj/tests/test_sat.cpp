#include <random>

#include "doctest.h"
#include "hintmc/aig.hpp"
#include "hintmc/sat.hpp"

using namespace hintmc;
using sat::mk_lit;
using sat::Solver;
using sat::Status;

namespace {

struct RandomCnf {
  int num_vars;
  std::vector<std::vector<sat::Lit>> clauses;
};

RandomCnf random_cnf(uint64_t seed, int max_vars, int max_clauses) {
  std::mt19937_64 rng(seed);
  RandomCnf cnf;
  cnf.num_vars = 1 + static_cast<int>(rng() % max_vars);
  int n_clauses = 1 + static_cast<int>(rng() % max_clauses);
  for (int i = 0; i < n_clauses; ++i) {
    int width = 1 + static_cast<int>(rng() % 4);
    std::vector<sat::Lit> c;
    for (int k = 0; k < width; ++k)
      c.push_back(mk_lit(static_cast<sat::Var>(rng() % cnf.num_vars),
                         (rng() & 1) != 0));
    cnf.clauses.push_back(c);
  }
  return cnf;
}

// Exhaustive truth-table check, the independent oracle for soundness and
// completeness on small instances.
bool enumerate_sat(const RandomCnf& cnf, const std::vector<sat::Lit>& assume) {
  for (uint32_t m = 0; m < (1u << cnf.num_vars); ++m) {
    auto holds = [&](sat::Lit l) {
      bool v = (m >> l.var()) & 1;
      return l.sign() ? !v : v;
    };
    bool ok = true;
    for (sat::Lit a : assume)
      if (!holds(a)) {
        ok = false;
        break;
      }
    for (const auto& c : cnf.clauses) {
      if (!ok) break;
      bool cl = false;
      for (sat::Lit l : c) cl = cl || holds(l);
      ok = ok && cl;
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("empty database is satisfiable under any assumption") {
  Solver s;
  sat::Var v = s.new_var();
  CHECK(s.solve(std::vector<sat::Lit>{mk_lit(v)}) == Status::Sat);
  CHECK(s.model_value(mk_lit(v)));
}

TEST_CASE("unit conflict yields the failed assumption") {
  Solver s;
  sat::Var v = s.new_var();
  s.add_clause({mk_lit(v, true)});
  CHECK(s.solve(std::vector<sat::Lit>{mk_lit(v)}) == Status::Unsat);
  REQUIRE(s.failed_assumptions().size() == 1);
  CHECK(s.failed_assumptions()[0] == mk_lit(v));
}

TEST_CASE("tautology adds no behavior") {
  Solver s;
  sat::Var v = s.new_var();
  s.add_clause({mk_lit(v), mk_lit(v, true)});
  CHECK(s.solve(std::vector<sat::Lit>{mk_lit(v)}) == Status::Sat);
  CHECK(s.solve(std::vector<sat::Lit>{mk_lit(v, true)}) == Status::Sat);
}

TEST_CASE("agrees with truth-table enumeration on random CNFs") {
  for (uint64_t seed = 0; seed < 300; ++seed) {
    RandomCnf cnf = random_cnf(seed, 16, 40);
    Solver s;
    for (int i = 0; i < cnf.num_vars; ++i) s.new_var();
    bool consistent = true;
    for (const auto& c : cnf.clauses) consistent = s.add_clause(c) && consistent;
    Status st = s.solve();
    bool want = enumerate_sat(cnf, {});
    CHECK(st == (want ? Status::Sat : Status::Unsat));
    if (st == Status::Sat) {
      // model must satisfy every clause
      for (const auto& c : cnf.clauses) {
        bool cl = false;
        for (sat::Lit l : c) cl = cl || s.model_value(l);
        CHECK(cl);
      }
    }
  }
}

TEST_CASE("agrees with enumeration under random assumptions") {
  for (uint64_t seed = 1000; seed < 1200; ++seed) {
    RandomCnf cnf = random_cnf(seed, 12, 24);
    std::mt19937_64 rng(seed ^ 0xabcdef);
    std::vector<sat::Lit> assume;
    int n_assume = static_cast<int>(rng() % 5);
    for (int i = 0; i < n_assume; ++i)
      assume.push_back(mk_lit(static_cast<sat::Var>(rng() % cnf.num_vars),
                              (rng() & 1) != 0));
    Solver s;
    for (int i = 0; i < cnf.num_vars; ++i) s.new_var();
    for (const auto& c : cnf.clauses) s.add_clause(c);
    Status st = s.solve(assume);
    bool want = enumerate_sat(cnf, assume);
    CHECK(st == (want ? Status::Sat : Status::Unsat));
    if (st == Status::Unsat) {
      // The failed subset must itself be sufficient.
      std::vector<sat::Lit> core = s.failed_assumptions();
      for (sat::Lit l : core)
        CHECK(std::find(assume.begin(), assume.end(), l) != assume.end());
      Solver s2;
      for (int i = 0; i < cnf.num_vars; ++i) s2.new_var();
      for (const auto& c : cnf.clauses) s2.add_clause(c);
      CHECK(s2.solve(core) == Status::Unsat);
    }
  }
}

TEST_CASE("retraction restores prior satisfiability") {
  Solver s;
  sat::Var v = s.new_var();
  sat::ClauseHandle h = s.add_retractable({mk_lit(v)});
  CHECK(s.solve(std::vector<sat::Lit>{mk_lit(v, true)}) == Status::Unsat);
  s.retract(h);
  CHECK(s.solve(std::vector<sat::Lit>{mk_lit(v, true)}) == Status::Sat);
}

TEST_CASE("randomized add/retract/solve fuzz") {
  for (uint64_t seed = 42; seed < 72; ++seed) {
    std::mt19937_64 rng(seed);
    RandomCnf base = random_cnf(seed, 10, 12);
    Solver s;
    for (int i = 0; i < base.num_vars; ++i) s.new_var();
    for (const auto& c : base.clauses) s.add_clause(c);
    // live = retractable clauses currently active
    std::vector<std::pair<sat::ClauseHandle, std::vector<sat::Lit>>> live;
    for (int round = 0; round < 30; ++round) {
      int action = static_cast<int>(rng() % 3);
      if (action == 0) {
        int width = 1 + static_cast<int>(rng() % 3);
        std::vector<sat::Lit> c;
        for (int k = 0; k < width; ++k)
          c.push_back(mk_lit(static_cast<sat::Var>(rng() % base.num_vars),
                             (rng() & 1) != 0));
        live.emplace_back(s.add_retractable(c), c);
      } else if (action == 1 && !live.empty()) {
        size_t idx = rng() % live.size();
        s.retract(live[idx].first);
        live.erase(live.begin() + idx);
      } else {
        RandomCnf combined = base;
        for (const auto& [h, c] : live) combined.clauses.push_back(c);
        Status st = s.solve();
        CHECK(st == (enumerate_sat(combined, {}) ? Status::Sat
                                                 : Status::Unsat));
      }
    }
  }
}

TEST_CASE("conflict budget produces Unknown") {
  // Hard pigeonhole-flavored instance so the budget trips.
  Solver s;
  constexpr int kHoles = 7;
  sat::Var p[kHoles + 1][kHoles];
  for (int i = 0; i <= kHoles; ++i)
    for (int j = 0; j < kHoles; ++j) p[i][j] = s.new_var();
  for (int i = 0; i <= kHoles; ++i) {
    std::vector<sat::Lit> c;
    for (int j = 0; j < kHoles; ++j) c.push_back(mk_lit(p[i][j]));
    s.add_clause(c);
  }
  for (int j = 0; j < kHoles; ++j)
    for (int i = 0; i <= kHoles; ++i)
      for (int k = i + 1; k <= kHoles; ++k)
        s.add_clause({mk_lit(p[i][j], true), mk_lit(p[k][j], true)});
  s.set_conflict_budget(50);
  CHECK(s.solve() == Status::Unknown);
  s.set_conflict_budget(-1);
  CHECK(s.solve() == Status::Unsat);
}

TEST_CASE("transition relation answers one-step queries") {
  // 3-bit counter again, via the netlist encoding.
  aig::NetlistBuilder b;
  aig::Lit b0 = b.add_latch("c[0]");
  aig::Lit b1 = b.add_latch("c[1]");
  aig::Lit b2 = b.add_latch("c[2]");
  b.set_next(b0, ~b0);
  b.set_next(b1, b.mk_xor(b1, b0));
  b.set_next(b2, b.mk_xor(b2, b.mk_and(b1, b0)));
  b.add_output(b.mk_and(std::array{b0, b1, b2}), "is7");
  aig::Netlist n = b.build();

  auto inst = sat::SolverInstance::load_transition(n);
  auto state_assumps = [&](int value, bool primed) {
    std::vector<sat::Lit> a;
    uint32_t vars[3] = {b0.var(), b1.var(), b2.var()};
    for (int i = 0; i < 3; ++i) {
      bool bit = (value >> i) & 1;
      sat::Lit l = primed ? inst.lit_next(vars[i])
                          : inst.lit_cur(aig::Lit::make(vars[i]));
      a.push_back(bit ? l : ~l);
    }
    return a;
  };

  // 2 -> 3 is a real transition; 2 -> 5 is not; 7 wraps to 0, not 8==0? 7->0.
  auto q = state_assumps(2, false);
  auto q2 = state_assumps(3, true);
  q.insert(q.end(), q2.begin(), q2.end());
  CHECK(inst.solve(q) == Status::Sat);

  q = state_assumps(2, false);
  q2 = state_assumps(5, true);
  q.insert(q.end(), q2.begin(), q2.end());
  CHECK(inst.solve(q) == Status::Unsat);

  q = state_assumps(7, false);
  q2 = state_assumps(0, true);
  q.insert(q.end(), q2.begin(), q2.end());
  CHECK(inst.solve(q) == Status::Sat);
}

TEST_CASE("identity latch: v and not v' is unsat") {
  aig::NetlistBuilder b;
  aig::Lit v = b.add_latch("v");
  b.set_next(v, v);
  b.add_output(v, "o");
  aig::Netlist n = b.build();
  auto inst = sat::SolverInstance::load_transition(n);
  std::vector<sat::Lit> q{inst.lit_cur(v), ~inst.lit_next(v.var())};
  CHECK(inst.solve(q) == Status::Unsat);
}

TEST_CASE("solver model agrees with netlist simulation") {
  for (uint64_t seed = 7; seed < 27; ++seed) {
    std::mt19937_64 rng(seed);
    aig::NetlistBuilder b;
    std::vector<aig::Lit> pool{aig::lit_false};
    std::vector<aig::Lit> ins, las;
    for (int i = 0; i < 3; ++i) {
      ins.push_back(b.add_input("i" + std::to_string(i)));
      pool.push_back(ins.back());
    }
    for (int i = 0; i < 4; ++i) {
      las.push_back(b.add_latch("l" + std::to_string(i)));
      pool.push_back(las.back());
    }
    auto pick = [&]() {
      aig::Lit l = pool[rng() % pool.size()];
      return (rng() & 1) ? ~l : l;
    };
    for (int i = 0; i < 10; ++i) pool.push_back(b.mk_and(pick(), pick()));
    for (aig::Lit l : las) b.set_next(l, pick());
    b.add_output(pick(), "o");
    aig::Netlist n = b.build();

    std::vector<bool> state(4), inputs(3);
    for (int i = 0; i < 4; ++i) state[i] = rng() & 1;
    for (int i = 0; i < 3; ++i) inputs[i] = rng() & 1;
    std::vector<bool> next = n.next_state(state, inputs);

    auto inst = sat::SolverInstance::load_transition(n);
    std::vector<sat::Lit> assumps;
    for (int i = 0; i < 4; ++i) {
      sat::Lit l = inst.lit_cur(las[i]);
      assumps.push_back(state[i] ? l : ~l);
    }
    for (int i = 0; i < 3; ++i) {
      sat::Lit l = inst.lit_cur(ins[i]);
      assumps.push_back(inputs[i] ? l : ~l);
    }
    REQUIRE(inst.solve(assumps) == Status::Sat);
    for (int i = 0; i < 4; ++i)
      CHECK(inst.model_value(inst.lit_next(las[i].var())) == next[i]);
  }
}
