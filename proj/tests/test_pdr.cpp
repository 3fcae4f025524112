#include <array>
#include <random>

#include "doctest.h"
#include "hintmc/aig.hpp"
#include "hintmc/pdr.hpp"

using namespace hintmc;
using aig::Lit;
using aig::Netlist;
using aig::NetlistBuilder;
using pdr::Verdict;

namespace {

// n-bit free-running counter with an equality comparator output.
Netlist make_counter(int bits, unsigned target_value) {
  NetlistBuilder b;
  std::vector<Lit> regs;
  for (int i = 0; i < bits; ++i)
    regs.push_back(b.add_latch("cnt[" + std::to_string(i) + "]"));
  Lit carry = aig::lit_true;
  for (int i = 0; i < bits; ++i) {
    b.set_next(regs[i], b.mk_xor(regs[i], carry));
    carry = b.mk_and(carry, regs[i]);
  }
  Lit eq = aig::lit_true;
  for (int i = 0; i < bits; ++i) {
    bool bit = (target_value >> i) & 1;
    eq = b.mk_and(eq, bit ? regs[i] : ~regs[i]);
  }
  b.add_output(eq, "hit");
  return b.build();
}

}  // namespace

TEST_CASE("constant-false bad is proved with an empty invariant") {
  Netlist n = Netlist::parse("aag 1 0 1 1 0\n2 2\n0\nl0 v\n");
  auto res = pdr::pdr(n, 0, pdr::kNoTimeout);
  CHECK(res.verdict == Verdict::Proof);
  CHECK(res.invariant.empty());
  CHECK(pdr::verify_invariant(n, 0, res.invariant));
}

TEST_CASE("latch forced to one yields a depth-1 counterexample") {
  // INIT v=0, next(v)=1, bad = v.
  NetlistBuilder b;
  Lit v = b.add_latch("v");
  b.set_next(v, aig::lit_true);
  b.add_output(v, "bad");
  Netlist n = b.build();
  auto res = pdr::pdr(n, 0, pdr::kNoTimeout);
  CHECK(res.verdict == Verdict::Counterexample);
  CHECK(res.trace.size() == 2);  // depth 1
  CHECK(pdr::replays_to_bad(n, 0, res.trace));
}

TEST_CASE("3-bit counter reaches value 5 at depth 5") {
  Netlist n = make_counter(3, 5);
  auto res = pdr::pdr(n, 0, pdr::kNoTimeout);
  CHECK(res.verdict == Verdict::Counterexample);
  CHECK(res.trace.size() == 6);  // depth 5
  CHECK(pdr::replays_to_bad(n, 0, res.trace));
}

TEST_CASE("counter with unreachable comparator value is proved") {
  // 4-bit counter gated to stop at 9; value 12 unreachable.
  NetlistBuilder b;
  std::vector<Lit> regs;
  for (int i = 0; i < 4; ++i)
    regs.push_back(b.add_latch("c[" + std::to_string(i) + "]"));
  Lit at9 = b.mk_and(std::array{regs[0], ~regs[1], ~regs[2], regs[3]});
  Lit carry = ~at9;  // hold at 9
  for (int i = 0; i < 4; ++i) {
    b.set_next(regs[i], b.mk_xor(regs[i], carry));
    carry = b.mk_and(carry, regs[i]);
  }
  Lit at12 = b.mk_and(std::array{~regs[0], ~regs[1], regs[2], regs[3]});
  b.add_output(at12, "bad12");
  Netlist n = b.build();
  auto res = pdr::pdr(n, 0, pdr::kNoTimeout);
  CHECK(res.verdict == Verdict::Proof);
  CHECK_FALSE(res.invariant.empty());
  CHECK(pdr::verify_invariant(n, 0, res.invariant));
}

TEST_CASE("generalize keeps a singleton cube") {
  Netlist n = make_counter(3, 5);
  pdr::PdrEngine engine(n, 0);
  pdr::Cube cube{Lit::make(n.latches()[2].var, false)};
  // Prime the engine's frames so level 1 exists.
  auto res = engine.generalize(cube, 1);
  CHECK(res.size() == 1);
  CHECK(res[0] == ~cube[0]);
}

TEST_CASE("generalize drops literals implied inductively") {
  // Two independent latches: p stays 0 forever, q toggles. Blocking
  // {p=1, q=1} relative to INIT can drop q.
  NetlistBuilder b;
  Lit p = b.add_latch("p");
  Lit q = b.add_latch("q");
  b.set_next(p, p);
  b.set_next(q, ~q);
  b.add_output(p, "bad");
  Netlist n = b.build();
  pdr::PdrEngine engine(n, 0);
  pdr::Cube cube{p, q};  // positive literals of both latches
  pdr::Clause c = engine.generalize(cube, 1);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == ~p);
}

TEST_CASE("generalize refuses drops that re-include the initial state") {
  NetlistBuilder b;
  Lit p = b.add_latch("p");
  Lit q = b.add_latch("q");
  b.set_next(p, p);
  b.set_next(q, q);
  b.add_output(b.mk_and(p, q), "bad");
  Netlist n = b.build();
  pdr::PdrEngine engine(n, 0);
  // Cube {p=1, q=0}: dropping p would leave {q=0} which contains INIT.
  pdr::Cube cube{p, ~q};
  pdr::Clause c = engine.generalize(cube, 1);
  bool has_positive = false;
  for (Lit l : pdr::negate_lits(c)) has_positive = has_positive || !l.negated();
  CHECK(has_positive);
}

TEST_CASE("validate_sideload accepts tautologies and true clauses") {
  Netlist n = make_counter(3, 5);
  uint32_t v0 = n.latches()[0].var;
  pdr::Clause taut{Lit::make(v0), Lit::make(v0, true)};
  auto rep = pdr::validate_sideload(n, std::vector<pdr::Clause>{taut});
  CHECK(rep.accepted.size() == 1);
  CHECK(rep.rejected.empty());
}

TEST_CASE("validate_sideload rejects a clause broken by one step") {
  // INIT v=0 satisfies ~v, but next(v)=1 violates it: check (b) fails.
  NetlistBuilder b;
  Lit v = b.add_latch("v");
  b.set_next(v, aig::lit_true);
  b.add_output(v, "bad");
  Netlist n = b.build();
  pdr::Clause c{~v};
  auto rep = pdr::validate_sideload(n, std::vector<pdr::Clause>{c});
  CHECK(rep.accepted.empty());
  REQUIRE(rep.rejected.size() == 1);
  CHECK(rep.rejected[0].failed_check == "step");
}

TEST_CASE("validate_sideload rejects clauses false at INIT") {
  NetlistBuilder b;
  Lit v = b.add_latch("v");
  b.set_next(v, v);
  b.add_output(v, "bad");
  Netlist n = b.build();
  pdr::Clause c{v};  // INIT sets v=0, so clause (v) fails check (a)
  auto rep = pdr::validate_sideload(n, std::vector<pdr::Clause>{c});
  REQUIRE(rep.rejected.size() == 1);
  CHECK(rep.rejected[0].failed_check == "init");
}

TEST_CASE("a proof invariant side-loads onto the same netlist") {
  NetlistBuilder b;
  std::vector<Lit> regs;
  for (int i = 0; i < 4; ++i)
    regs.push_back(b.add_latch("c[" + std::to_string(i) + "]"));
  Lit at9 = b.mk_and(std::array{regs[0], ~regs[1], ~regs[2], regs[3]});
  Lit carry = ~at9;
  for (int i = 0; i < 4; ++i) {
    b.set_next(regs[i], b.mk_xor(regs[i], carry));
    carry = b.mk_and(carry, regs[i]);
  }
  b.add_output(b.mk_and(std::array{~regs[0], ~regs[1], regs[2], regs[3]}),
               "bad12");
  Netlist n = b.build();
  auto res = pdr::pdr(n, 0, pdr::kNoTimeout);
  REQUIRE(res.verdict == Verdict::Proof);
  auto rep = pdr::validate_sideload(n, res.invariant);
  CHECK(rep.rejected.empty());
  CHECK(rep.accepted.size() == res.invariant.size());

  // Side-loading a validated invariant must not flip the verdict.
  auto res2 = pdr::pdr(n, 0, pdr::kNoTimeout, res.invariant);
  CHECK(res2.verdict == Verdict::Proof);
}

TEST_CASE("timeout zero checkpoints after the first frame") {
  Netlist n = make_counter(4, 11);
  auto res = pdr::pdr(n, 0, 0.0);
  REQUIRE(res.verdict == Verdict::Unknown);
  REQUIRE(res.checkpoint.has_value());
  CHECK(res.checkpoint->frontier >= 1);

  // Resume and finish: same verdict as an uninterrupted run.
  auto resumed = pdr::pdr(n, 0, pdr::kNoTimeout, {}, &*res.checkpoint);
  auto direct = pdr::pdr(n, 0, pdr::kNoTimeout);
  CHECK(resumed.verdict == direct.verdict);
  CHECK(resumed.verdict == Verdict::Counterexample);
  CHECK(pdr::replays_to_bad(n, 0, resumed.trace));
}

TEST_CASE("checkpoint json round-trips") {
  Netlist n = make_counter(4, 11);
  auto res = pdr::pdr(n, 0, 0.0);
  REQUIRE(res.checkpoint.has_value());
  std::string text = res.checkpoint->to_json();
  pdr::Checkpoint back = pdr::Checkpoint::from_json(text);
  CHECK(back.to_json() == text);
  auto resumed = pdr::pdr(n, 0, pdr::kNoTimeout, {}, &back);
  CHECK(resumed.verdict == Verdict::Counterexample);
}

TEST_CASE("checkpoint for another netlist is rejected") {
  Netlist n = make_counter(4, 11);
  Netlist other = make_counter(5, 11);
  auto res = pdr::pdr(n, 0, 0.0);
  REQUIRE(res.checkpoint.has_value());
  CHECK_THROWS_AS(pdr::pdr(other, 0, pdr::kNoTimeout, {}, &*res.checkpoint),
                  std::runtime_error);
}

TEST_CASE("restored frames validate against the frame conditions") {
  Netlist n = make_counter(5, 27);
  auto res = pdr::pdr(n, 0, 0.0);
  REQUIRE(res.verdict == Verdict::Unknown);
  pdr::PdrEngine engine(n, 0);
  engine.restore(*res.checkpoint);
  std::string why;
  CHECK_MESSAGE(engine.validate_frames(&why), why);
}

TEST_CASE("cti log entries are latch cubes with monotone timestamps") {
  Netlist n = make_counter(4, 9);
  auto res = pdr::pdr(n, 0, pdr::kNoTimeout);
  CHECK(res.verdict == Verdict::Counterexample);
  CHECK(res.stats.ctis == res.cti_log.size());
  CHECK(res.cti_log.size() > 0);
  uint64_t prev = 0;
  bool first = true;
  for (const auto& cti : res.cti_log) {
    for (Lit l : cti.cube) CHECK(n.is_latch(l.var()));
    if (!first) CHECK(cti.timestamp > prev);
    prev = cti.timestamp;
    first = false;
  }
}

TEST_CASE("clause text round-trips through symbol names") {
  Netlist n = make_counter(3, 5);
  pdr::Clause c{Lit::make(n.latches()[0].var, true),
                Lit::make(n.latches()[2].var, false)};
  std::string text = pdr::clauses_to_text(n, std::vector<pdr::Clause>{c});
  auto back = pdr::clauses_from_text(n, text);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == c);
  CHECK_THROWS(pdr::clauses_from_text(n, "nosuch\n"));
}
