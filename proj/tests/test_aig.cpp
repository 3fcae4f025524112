#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "hintmc/aig.hpp"

using namespace hintmc;
using aig::Lit;
using aig::Netlist;
using aig::NetlistBuilder;

namespace {

// 3-bit counter: increments every cycle, output raised when value == 7.
Netlist make_counter3() {
  NetlistBuilder b;
  Lit b0 = b.add_latch("cnt[0]");
  Lit b1 = b.add_latch("cnt[1]");
  Lit b2 = b.add_latch("cnt[2]");
  b.set_next(b0, ~b0);
  Lit carry0 = b0;
  b.set_next(b1, b.mk_xor(b1, carry0));
  Lit carry1 = b.mk_and(b1, carry0);
  b.set_next(b2, b.mk_xor(b2, carry1));
  Lit all = b.mk_and(std::array{b0, b1, b2});
  b.add_output(all, "is7");
  return b.build();
}

// Brute-force reachability on the reversed node graph, the independent
// oracle for tfi_registers.
std::set<uint32_t> tfi_oracle(const Netlist& n, std::vector<uint32_t> roots) {
  std::set<uint32_t> reached(roots.begin(), roots.end());
  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](uint32_t v) {
      if (reached.insert(v).second) changed = true;
    };
    for (uint32_t v : std::set<uint32_t>(reached)) {
      if (n.kind(v) == aig::NodeKind::Gate) {
        add(n.gate_of(v).rhs0.var());
        add(n.gate_of(v).rhs1.var());
      } else if (n.kind(v) == aig::NodeKind::Latch) {
        add(n.latch_of(v).next.var());
      }
    }
  }
  std::set<uint32_t> regs;
  for (uint32_t v : reached)
    if (n.kind(v) == aig::NodeKind::Latch || n.kind(v) == aig::NodeKind::Input)
      regs.insert(v);
  return regs;
}

Netlist random_netlist(uint64_t seed, int num_inputs, int num_latches,
                       int num_gates) {
  std::mt19937_64 rng(seed);
  NetlistBuilder b;
  std::vector<Lit> nodes{aig::lit_false};
  std::vector<Lit> latches;
  for (int i = 0; i < num_inputs; ++i)
    nodes.push_back(b.add_input("in_" + std::to_string(i)));
  for (int i = 0; i < num_latches; ++i) {
    Lit l = b.add_latch("reg_" + std::to_string(i));
    nodes.push_back(l);
    latches.push_back(l);
  }
  auto pick = [&]() {
    Lit l = nodes[rng() % nodes.size()];
    return (rng() & 1) ? ~l : l;
  };
  for (int i = 0; i < num_gates; ++i) nodes.push_back(b.mk_and(pick(), pick()));
  for (Lit l : latches) b.set_next(l, pick());
  b.add_output(pick(), "bad");
  return b.build();
}

}  // namespace

TEST_CASE("parse constant-false output") {
  Netlist n = Netlist::parse("aag 0 0 0 1 0\n0\n");
  CHECK(n.num_outputs() == 1);
  CHECK(n.outputs()[0] == aig::lit_false);
  auto steps = n.simulate({});
  CHECK(steps.size() == 1);
  CHECK_FALSE(steps[0].outputs[0]);
}

TEST_CASE("parse identity netlist") {
  Netlist n = Netlist::parse("aag 1 1 0 1 0\n2\n2\n");
  CHECK(n.num_inputs() == 1);
  CHECK(n.outputs()[0] == Lit::make(1));
  auto steps = n.simulate({{true}, {false}});
  CHECK(steps[0].outputs[0]);
  CHECK_FALSE(steps[1].outputs[0]);
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(Netlist::parse("agg 1 1\n"), aig::ParseError);
  CHECK_THROWS_AS(Netlist::parse("aag 1 1 0 1\n2\n2\n"), aig::ParseError);
  // literal exceeding maxvar
  CHECK_THROWS_AS(Netlist::parse("aag 1 1 0 1 0\n2\n4\n"), aig::ParseError);
  // AIGER 1.9 extended header
  CHECK_THROWS_AS(Netlist::parse("aag 1 1 0 0 0 1\n2\n2\n"), aig::ParseError);
  // latch reset field
  CHECK_THROWS_AS(Netlist::parse("aag 1 0 1 1 0\n2 2 1\n2\n"), aig::ParseError);
  // duplicate definition
  CHECK_THROWS_AS(Netlist::parse("aag 2 2 0 0 0\n2\n2\n"), std::exception);
}

TEST_CASE("serialize round-trips the counter") {
  Netlist n = make_counter3();
  std::string text = n.serialize();
  Netlist m = Netlist::parse(text);
  CHECK(m.serialize() == text);
  CHECK(m.hash() == n.hash());
}

TEST_CASE("serialize round-trips random netlists structurally") {
  for (uint64_t seed = 0; seed < 25; ++seed) {
    Netlist n = random_netlist(seed, 3, 5, 12);
    Netlist m = Netlist::parse(n.serialize());
    CHECK(m.serialize() == n.serialize());
    CHECK(m.hash() == n.hash());
  }
}

TEST_CASE("binary parse agrees with ascii form") {
  // Hand-assembled binary AIGER of a 1-input, 1-latch, 1-gate netlist:
  // latch 2 next=4, gate 6 = 2 & 4 ... here encoded per the delta scheme.
  // aag equivalent: "aag 3 1 1 1 1\n2\n4 6\n6\n6 4 2\n"
  std::string bin = "aig 3 1 1 1 1\n6\n6\n";
  bin.push_back(static_cast<char>(2));  // delta0 = 6-4
  bin.push_back(static_cast<char>(2));  // delta1 = 4-2
  Netlist n = Netlist::parse(bin);
  CHECK(n.num_inputs() == 1);
  CHECK(n.num_latches() == 1);
  CHECK(n.num_gates() == 1);
  CHECK(n.gates()[0].rhs0 == Lit::make(2));
  CHECK(n.gates()[0].rhs1 == Lit::make(1, false));
  CHECK(n.latches()[0].next == Lit::make(3));
}

TEST_CASE("comments survive a round trip") {
  std::string text = "aag 1 1 0 1 0\n2\n2\ni0 x\nc\nhello\nworld\n";
  Netlist n = Netlist::parse(text);
  REQUIRE(n.comments().size() == 2);
  CHECK(n.comments()[0] == "hello");
  CHECK(n.serialize() == text);
}

TEST_CASE("counter reaches 7 after 7 steps") {
  Netlist n = make_counter3();
  std::vector<std::vector<bool>> trace(8);  // zero-input machine
  auto steps = n.simulate(trace);
  REQUIRE(steps.size() == 8);
  for (int t = 0; t < 8; ++t) {
    int value = steps[t].state[0] + 2 * steps[t].state[1] + 4 * steps[t].state[2];
    CHECK(value == t);
    CHECK(steps[t].outputs[0] == (t == 7));
  }
}

TEST_CASE("simulate rejects arity mismatch") {
  Netlist n = Netlist::parse("aag 1 1 0 1 0\n2\n2\n");
  CHECK_THROWS_AS(n.simulate({{true, false}}), std::invalid_argument);
}

TEST_CASE("simulate of empty trace returns the initial step") {
  Netlist n = make_counter3();
  auto steps = n.simulate({});
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].state == std::vector<bool>{false, false, false});
}

TEST_CASE("tfi of a constant root is empty") {
  Netlist n = make_counter3();
  std::vector<uint32_t> roots{0};
  CHECK(n.tfi_registers(roots).empty());
}

TEST_CASE("tfi of the counter comparator covers all three latches") {
  Netlist n = make_counter3();
  std::vector<uint32_t> roots{n.outputs()[0].var()};
  auto regs = n.tfi_registers(roots);
  CHECK(regs.size() == 3);
}

TEST_CASE("tfi stays inside one of two independent counters") {
  NetlistBuilder b;
  Lit a0 = b.add_latch("a[0]");
  Lit a1 = b.add_latch("a[1]");
  Lit c0 = b.add_latch("b[0]");
  Lit c1 = b.add_latch("b[1]");
  b.set_next(a0, ~a0);
  b.set_next(a1, b.mk_xor(a1, a0));
  b.set_next(c0, ~c0);
  b.set_next(c1, b.mk_xor(c1, c0));
  Lit rootA = b.mk_and(a0, a1);
  b.add_output(rootA, "a_full");
  Netlist n = b.build();
  std::vector<uint32_t> roots{n.outputs()[0].var()};
  auto regs = n.tfi_registers(roots);
  CHECK(regs == std::vector<uint32_t>{a0.var(), a1.var()});
}

TEST_CASE("tfi equals brute-force reversed reachability on random netlists") {
  for (uint64_t seed = 100; seed < 140; ++seed) {
    Netlist n = random_netlist(seed, 4, 6, 30);
    std::mt19937_64 rng(seed ^ 0x9e3779b9);
    std::vector<uint32_t> roots{
        static_cast<uint32_t>(1 + rng() % n.max_var())};
    auto got = n.tfi_registers(roots);
    auto want = tfi_oracle(n, roots);
    CHECK(std::set<uint32_t>(got.begin(), got.end()) == want);
  }
}

TEST_CASE("groups: bracket suffixes form a 10-bit group") {
  NetlistBuilder b;
  std::vector<Lit> bits;
  for (int i = 0; i < 10; ++i)
    bits.push_back(b.add_latch("i_reg[" + std::to_string(i) + "]"));
  for (Lit l : bits) b.set_next(l, l);
  b.add_output(bits[0], "o");
  Netlist n = b.build();
  auto groups = n.build_groups();
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].name == "i_reg");
  CHECK(groups[0].width() == 10);
  CHECK(groups[0].bits[0] == bits[0].var());
  CHECK(groups[0].bits[9] == bits[9].var());
}

TEST_CASE("groups: underscore suffixes and singletons") {
  NetlistBuilder b;
  Lit f0 = b.add_latch("fsm_0");
  Lit f1 = b.add_latch("fsm_1");
  Lit alone = b.add_latch("ap_done");
  for (Lit l : {f0, f1, alone}) b.set_next(l, l);
  b.add_output(f0, "o");
  Netlist n = b.build();
  auto groups = n.build_groups();
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].name == "fsm");
  CHECK(groups[0].width() == 2);
  CHECK(groups[1].name == "ap_done");
  CHECK(groups[1].width() == 1);
}

TEST_CASE("groups: mixed unrelated names stay separate") {
  NetlistBuilder b;
  Lit x = b.add_latch("alpha[0]");
  Lit y = b.add_latch("beta[0]");
  for (Lit l : {x, y}) b.set_next(l, l);
  b.add_output(x, "o");
  Netlist n = b.build();
  CHECK(n.build_groups().size() == 2);
}

TEST_CASE("builder rejects cyclic or incomplete construction") {
  NetlistBuilder b;
  Lit l = b.add_latch("l");
  (void)l;
  CHECK_THROWS_AS(b.build(), std::logic_error);
  // gate referencing an undefined (larger) node index is rejected at
  // netlist construction
  CHECK_THROWS_AS(Netlist::parse("aag 3 1 0 1 1\n2\n6\n6 2 8\n"),
                  std::exception);
  CHECK_THROWS_AS(Netlist::parse("aag 2 1 0 1 1\n2\n4\n4 4 2\n"),
                  std::exception);
}

TEST_CASE("strashing folds duplicate gates") {
  NetlistBuilder b;
  Lit x = b.add_input("x");
  Lit y = b.add_input("y");
  Lit g1 = b.mk_and(x, y);
  Lit g2 = b.mk_and(y, x);
  CHECK(g1 == g2);
  CHECK(b.mk_and(x, aig::lit_true) == x);
  CHECK(b.mk_and(x, aig::lit_false) == aig::lit_false);
  CHECK(b.mk_and(x, ~x) == aig::lit_false);
}
