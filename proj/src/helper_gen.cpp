#include "hintmc/helper_gen.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hintmc {

const char* to_string(RuleFamily f) {
  switch (f) {
    case RuleFamily::LoopBound:
      return "LoopBound";
    case RuleFamily::FsmOneHot:
      return "FsmOneHot";
    case RuleFamily::FifoPtrEmpty:
      return "FifoPtrEmpty";
    case RuleFamily::FifoPtrFull:
      return "FifoPtrFull";
    case RuleFamily::FifoPtrBound:
      return "FifoPtrBound";
    case RuleFamily::FifoMutex:
      return "FifoMutex";
    case RuleFamily::PipelineWindow:
      return "PipelineWindow";
    case RuleFamily::PipelineFlip:
      return "PipelineFlip";
    case RuleFamily::LoopOrder:
      return "LoopOrder";
    case RuleFamily::FunctionOrder:
      return "FunctionOrder";
  }
  return "?";
}

int family_priority(RuleFamily f) {
  switch (f) {
    case RuleFamily::LoopBound:
      return 0;
    case RuleFamily::FsmOneHot:
      return 1;
    case RuleFamily::FifoPtrEmpty:
    case RuleFamily::FifoPtrFull:
    case RuleFamily::FifoPtrBound:
    case RuleFamily::FifoMutex:
      return 2;
    case RuleFamily::PipelineWindow:
    case RuleFamily::PipelineFlip:
      return 3;
    case RuleFamily::LoopOrder:
    case RuleFamily::FunctionOrder:
      return 4;
  }
  return 9;
}

// ---------------------------------------------------------------------
// Expression constructors
// ---------------------------------------------------------------------

ExprPtr Expr::mk_const(bool v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->const_value = v;
  return e;
}

ExprPtr Expr::mk_bit(uint32_t var, bool negated, bool prev) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Bit;
  e->signal = var;
  e->bit_negated = negated;
  e->prev = prev;
  return e;
}

ExprPtr Expr::mk_sticky(uint32_t var) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Sticky;
  e->signal = var;
  return e;
}

ExprPtr Expr::mk_cmp(CmpOp op, ValueRef lhs, ValueRef rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Cmp;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr Expr::mk_not(ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Not;
  e->args = {std::move(x)};
  return e;
}

ExprPtr Expr::mk_and(std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::And;
  e->args = std::move(args);
  return e;
}

ExprPtr Expr::mk_or(std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Or;
  e->args = std::move(args);
  return e;
}

ExprPtr Expr::mk_implies(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Implies;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::mk_exactly_one(std::vector<uint32_t> group) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::ExactlyOne;
  e->group = std::move(group);
  return e;
}

// ---------------------------------------------------------------------
// Pretty printing
// ---------------------------------------------------------------------

namespace {

std::string signal_name(const aig::Netlist& n, uint32_t var) {
  if (n.is_latch(var)) return n.latch_names()[n.class_index(var)];
  if (n.is_input(var)) return n.input_names()[n.class_index(var)];
  return "n" + std::to_string(var);
}

std::string strip_bit_suffix(const std::string& name) {
  if (!name.empty() && name.back() == ']') {
    size_t open = name.rfind('[');
    if (open != std::string::npos) return name.substr(0, open);
  }
  size_t us = name.rfind('_');
  if (us != std::string::npos && us + 1 < name.size() &&
      std::all_of(name.begin() + us + 1, name.end(),
                  [](char c) { return isdigit(static_cast<unsigned char>(c)); }))
    return name.substr(0, us);
  return name;
}

std::string value_name(const aig::Netlist& n, const ValueRef& v) {
  if (v.is_constant()) return std::to_string(v.constant);
  std::string base = strip_bit_suffix(signal_name(n, v.bits[0]));
  return v.prev ? "prev(" + base + ")" : base;
}

const char* cmp_name(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "==";
    case CmpOp::Ne:
      return "!=";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Gt:
      return ">";
  }
  return "?";
}

}  // namespace

std::string Expr::pretty(const aig::Netlist& n) const {
  switch (kind) {
    case Kind::Const:
      return const_value ? "true" : "false";
    case Kind::Bit: {
      std::string base = signal_name(n, signal);
      if (prev) base = "prev(" + base + ")";
      return bit_negated ? "!" + base : base;
    }
    case Kind::Sticky:
      return "seen(" + signal_name(n, signal) + ")";
    case Kind::Cmp:
      return "(" + value_name(n, lhs) + " " + cmp_name(op) + " " +
             value_name(n, rhs) + ")";
    case Kind::Not:
      return "!" + args[0]->pretty(n);
    case Kind::And:
    case Kind::Or: {
      std::string sep = kind == Kind::And ? " & " : " | ";
      std::string out = "(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) out += sep;
        out += args[i]->pretty(n);
      }
      return out + ")";
    }
    case Kind::Implies:
      return "(" + args[0]->pretty(n) + " -> " + args[1]->pretty(n) + ")";
    case Kind::ExactlyOne:
      return "onehot(" + strip_bit_suffix(signal_name(n, group[0])) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------

namespace {

struct Resolver {
  const aig::Netlist& netlist;
  std::map<std::string, aig::SignalGroup> groups;

  explicit Resolver(const aig::Netlist& n) : netlist(n) {
    for (aig::SignalGroup& g : n.build_groups()) groups[g.name] = std::move(g);
  }

  const aig::SignalGroup* group(const std::string& name) const {
    auto it = groups.find(name);
    return it == groups.end() ? nullptr : &it->second;
  }
  std::optional<uint32_t> signal(const std::string& name) const {
    if (auto v = netlist.find_latch(name)) return v;
    if (auto v = netlist.find_input(name)) return v;
    return std::nullopt;
  }
};

ExprPtr none_asserted(const std::vector<uint32_t>& vars) {
  std::vector<ExprPtr> parts;
  for (uint32_t v : vars) parts.push_back(Expr::mk_bit(v, true));
  return Expr::mk_and(std::move(parts));
}

ExprPtr any_asserted(const std::vector<uint32_t>& vars) {
  std::vector<ExprPtr> parts;
  for (uint32_t v : vars) parts.push_back(Expr::mk_bit(v));
  return Expr::mk_or(std::move(parts));
}

// At most one register of the set differs from its previous-cycle value.
ExprPtr at_most_one_flip(const std::vector<uint32_t>& vars) {
  std::vector<ExprPtr> parts;
  auto flipped = [](uint32_t v) {
    return Expr::mk_or({Expr::mk_and({Expr::mk_bit(v), Expr::mk_bit(v, true, true)}),
                        Expr::mk_and({Expr::mk_bit(v, true), Expr::mk_bit(v, false, true)})});
  };
  for (size_t a = 0; a < vars.size(); ++a)
    for (size_t b = a + 1; b < vars.size(); ++b)
      parts.push_back(
          Expr::mk_not(Expr::mk_and({flipped(vars[a]), flipped(vars[b])})));
  return Expr::mk_and(std::move(parts));
}

// The asserted subset of the ordered register list forms a contiguous
// window: no asserted-deasserted-asserted pattern.
ExprPtr contiguous_window(const std::vector<uint32_t>& vars) {
  std::vector<ExprPtr> parts;
  for (size_t a = 0; a < vars.size(); ++a)
    for (size_t b = a + 1; b < vars.size(); ++b)
      for (size_t c = b + 1; c < vars.size(); ++c)
        parts.push_back(Expr::mk_not(
            Expr::mk_and({Expr::mk_bit(vars[a]), Expr::mk_bit(vars[b], true),
                          Expr::mk_bit(vars[c])})));
  return Expr::mk_and(std::move(parts));
}

}  // namespace

std::vector<Helper> generate_helpers(const aig::Netlist& netlist,
                                     const Manifest& manifest,
                                     std::vector<std::string>* diags) {
  Resolver res(netlist);
  std::vector<Helper> helpers;
  auto diag = [&](const std::string& msg) {
    if (diags) diags->push_back(msg);
  };
  auto emit = [&](RuleFamily family, const std::string& entry, ExprPtr pred,
                  std::vector<std::string> provenance) {
    helpers.push_back({std::string(to_string(family)) + ":" + entry, family,
                       std::move(pred), std::move(provenance)});
  };

  for (const LoopEntry& loop : manifest.loops) {
    const aig::SignalGroup* g = res.group(loop.variable);
    if (!g) {
      diag("loop '" + loop.name + "': variable group '" + loop.variable +
           "' not found; skipped");
      continue;
    }
    // Possible loop-variable values are 0..trip_count; only the upper
    // bound constrains anything.
    emit(RuleFamily::LoopBound, loop.name,
         Expr::mk_cmp(CmpOp::Le, ValueRef{g->bits, false, 0},
                      ValueRef{{}, false, loop.trip_count}),
         {loop.name, loop.variable});
  }

  for (const FsmEntry& fsm : manifest.fsms) {
    const aig::SignalGroup* g = res.group(fsm.group);
    if (!g) {
      diag("fsm group '" + fsm.group + "' not found; skipped");
      continue;
    }
    emit(RuleFamily::FsmOneHot, fsm.group, Expr::mk_exactly_one(g->bits),
         {fsm.group});
  }

  for (const FifoEntry& fifo : manifest.fifos) {
    const aig::SignalGroup* ptr = res.group(fifo.pointer);
    auto full_var = res.signal(fifo.full.signal);
    auto empty_var = res.signal(fifo.empty.signal);
    if (!ptr || !full_var || !empty_var) {
      diag("fifo '" + fifo.name + "': unresolved pointer or flags; skipped");
      continue;
    }
    ExprPtr is_full = Expr::mk_bit(*full_var, fifo.full.active_low);
    ExprPtr is_empty = Expr::mk_bit(*empty_var, fifo.empty.active_low);
    ValueRef ptr_val{ptr->bits, false, 0};
    std::vector<std::string> prov{fifo.name, fifo.pointer};
    emit(RuleFamily::FifoPtrEmpty, fifo.name,
         Expr::mk_implies(
             Expr::mk_cmp(CmpOp::Ne, ptr_val, ValueRef{{}, false, 0}),
             Expr::mk_not(is_empty)),
         prov);
    emit(RuleFamily::FifoPtrFull, fifo.name,
         Expr::mk_implies(
             Expr::mk_cmp(CmpOp::Ne, ptr_val, ValueRef{{}, false, fifo.depth}),
             Expr::mk_not(is_full)),
         prov);
    emit(RuleFamily::FifoPtrBound, fifo.name,
         Expr::mk_cmp(CmpOp::Le, ptr_val, ValueRef{{}, false, fifo.depth}),
         prov);
    emit(RuleFamily::FifoMutex, fifo.name,
         Expr::mk_not(Expr::mk_and({is_empty, is_full})), prov);
  }

  auto resolve_latches = [&](const std::vector<std::string>& names,
                             std::vector<uint32_t>& out) {
    for (const std::string& s : names) {
      auto v = netlist.find_latch(s);
      if (!v) return false;
      out.push_back(*v);
    }
    return true;
  };

  for (const PipelineEntry& p : manifest.pipelines) {
    std::vector<uint32_t> enables, exits;
    if (!resolve_latches(p.enables, enables)) {
      diag("pipeline '" + p.name + "': unresolved enable register; skipped");
      continue;
    }
    if (!resolve_latches(p.exits, exits)) {
      diag("pipeline '" + p.name + "': unresolved exit register; skipped");
      continue;
    }
    // Window/flip constraints are vacuous below three (resp. two)
    // registers and are not emitted.
    if (enables.size() >= 3)
      emit(RuleFamily::PipelineWindow, p.name, contiguous_window(enables),
           {p.name});
    if (enables.size() >= 2)
      emit(RuleFamily::PipelineFlip, p.name + ":enable",
           at_most_one_flip(enables), {p.name});
    if (exits.size() >= 2)
      emit(RuleFamily::PipelineFlip, p.name + ":exit", at_most_one_flip(exits),
           {p.name});
  }

  auto find_loop = [&](const std::string& name) -> const LoopEntry* {
    for (const LoopEntry& l : manifest.loops)
      if (l.name == name) return &l;
    return nullptr;
  };
  auto find_pipeline = [&](const std::string& name) -> const PipelineEntry* {
    for (const PipelineEntry& p : manifest.pipelines)
      if (p.name == name) return &p;
    return nullptr;
  };

  for (const OrderEntry& o : manifest.loop_orders) {
    const LoopEntry* before = find_loop(o.before);
    const LoopEntry* after = find_loop(o.after);
    const PipelineEntry* pb = before ? find_pipeline(before->pipeline) : nullptr;
    const PipelineEntry* pa = after ? find_pipeline(after->pipeline) : nullptr;
    if (!pb || !pa) {
      diag("loop order " + o.before + " -> " + o.after +
           ": loops lack pipeline control registers; skipped");
      continue;
    }
    std::vector<uint32_t> en_b, en_a, ex_b, ex_a;
    if (!resolve_latches(pb->enables, en_b) ||
        !resolve_latches(pa->enables, en_a) ||
        !resolve_latches(pb->exits, ex_b) ||
        !resolve_latches(pa->exits, ex_a)) {
      diag("loop order " + o.before + " -> " + o.after +
           ": unresolved control register; skipped");
      continue;
    }
    // A later loop being active implies the earlier one has drained,
    // stated over enable registers and, when present, exit registers.
    std::vector<ExprPtr> parts{
        Expr::mk_implies(any_asserted(en_a), none_asserted(en_b))};
    if (!ex_b.empty() && !ex_a.empty())
      parts.push_back(Expr::mk_implies(any_asserted(ex_a), none_asserted(ex_b)));
    emit(RuleFamily::LoopOrder, o.before + ":" + o.after,
         Expr::mk_and(std::move(parts)), {o.before, o.after});
  }

  auto find_function = [&](const std::string& name) -> const FunctionEntry* {
    for (const FunctionEntry& f : manifest.functions)
      if (f.name == name) return &f;
    return nullptr;
  };

  for (const OrderEntry& o : manifest.function_orders) {
    const FunctionEntry* before = find_function(o.before);
    const FunctionEntry* after = find_function(o.after);
    if (!before || !after) {
      diag("function order " + o.before + " -> " + o.after +
           ": unknown function; skipped");
      continue;
    }
    auto start_a = res.signal(after->start);
    auto done_a = res.signal(after->done);
    auto idle_b = res.signal(before->idle);
    if (!start_a || !done_a || !idle_b) {
      diag("function order " + o.before + " -> " + o.after +
           ": unresolved interface signal; skipped");
      continue;
    }
    // busy(after) = started at some point and not yet reporting done;
    // while the later function is busy the earlier one must sit idle.
    ExprPtr busy = Expr::mk_and(
        {Expr::mk_sticky(*start_a), Expr::mk_not(Expr::mk_bit(*done_a))});
    emit(RuleFamily::FunctionOrder, o.before + ":" + o.after,
         Expr::mk_implies(std::move(busy), Expr::mk_bit(*idle_b)),
         {o.before, o.after});
  }

  return helpers;
}

// ---------------------------------------------------------------------
// Compilation to monitor logic
// ---------------------------------------------------------------------

namespace {

struct Compiler {
  const aig::Netlist& netlist;
  aig::NetlistBuilder builder;
  std::map<uint32_t, aig::Lit> prev_shadow;
  std::map<uint32_t, aig::Lit> sticky_value;

  explicit Compiler(const aig::Netlist& n) : netlist(n), builder(n) {}

  aig::Lit prev_of(uint32_t var) {
    auto it = prev_shadow.find(var);
    if (it != prev_shadow.end()) return it->second;
    if (!netlist.is_latch(var))
      throw std::runtime_error(
          "previous-value reference requires a latch signal");
    aig::Lit s = builder.add_latch("__mon_prev_" + signal_name(netlist, var));
    builder.set_next(s, aig::Lit::make(var));
    prev_shadow.emplace(var, s);
    return s;
  }

  aig::Lit sticky_of(uint32_t var) {
    auto it = sticky_value.find(var);
    if (it != sticky_value.end()) return it->second;
    aig::Lit seen =
        builder.add_latch("__mon_seen_" + signal_name(netlist, var));
    aig::Lit value = builder.mk_or(seen, aig::Lit::make(var));
    builder.set_next(seen, value);
    sticky_value.emplace(var, value);
    return value;
  }

  std::vector<aig::Lit> value_bits(const ValueRef& v, size_t width) {
    std::vector<aig::Lit> bits;
    if (v.is_constant()) {
      for (size_t i = 0; i < width; ++i)
        bits.push_back((v.constant >> i) & 1 ? aig::lit_true : aig::lit_false);
    } else {
      for (uint32_t var : v.bits)
        bits.push_back(v.prev ? prev_of(var) : aig::Lit::make(var));
      while (bits.size() < width) bits.push_back(aig::lit_false);
    }
    return bits;
  }

  static size_t const_width(uint64_t c) {
    size_t w = 0;
    while (c) {
      ++w;
      c >>= 1;
    }
    return std::max<size_t>(w, 1);
  }

  aig::Lit compile_cmp(const Expr& e) {
    size_t wl = e.lhs.is_constant() ? const_width(e.lhs.constant)
                                    : e.lhs.bits.size();
    size_t wr = e.rhs.is_constant() ? const_width(e.rhs.constant)
                                    : e.rhs.bits.size();
    if (!e.lhs.is_constant() && !e.rhs.is_constant() && wl != wr)
      throw std::runtime_error(
          "comparator width mismatch: " + std::to_string(wl) + " vs " +
          std::to_string(wr));
    size_t w = std::max(wl, wr);
    std::vector<aig::Lit> a = value_bits(e.lhs, w);
    std::vector<aig::Lit> b = value_bits(e.rhs, w);
    aig::Lit eq = aig::lit_true;
    aig::Lit gt = aig::lit_false;
    for (size_t i = w; i-- > 0;) {
      gt = builder.mk_or(gt, builder.mk_and(eq, builder.mk_and(a[i], ~b[i])));
      eq = builder.mk_and(eq, builder.mk_eq(a[i], b[i]));
    }
    switch (e.op) {
      case CmpOp::Eq:
        return eq;
      case CmpOp::Ne:
        return ~eq;
      case CmpOp::Gt:
        return gt;
      case CmpOp::Le:
        return ~gt;
      case CmpOp::Ge:
        return builder.mk_or(gt, eq);
      case CmpOp::Lt:
        return builder.mk_and(~gt, ~eq);
    }
    return aig::lit_false;
  }

  aig::Lit compile(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Const:
        return e.const_value ? aig::lit_true : aig::lit_false;
      case Expr::Kind::Bit: {
        aig::Lit l = e.prev ? prev_of(e.signal) : aig::Lit::make(e.signal);
        return e.bit_negated ? ~l : l;
      }
      case Expr::Kind::Sticky:
        return sticky_of(e.signal);
      case Expr::Kind::Cmp:
        return compile_cmp(e);
      case Expr::Kind::Not:
        return ~compile(*e.args[0]);
      case Expr::Kind::And: {
        aig::Lit acc = aig::lit_true;
        for (const ExprPtr& a : e.args) acc = builder.mk_and(acc, compile(*a));
        return acc;
      }
      case Expr::Kind::Or: {
        aig::Lit acc = aig::lit_false;
        for (const ExprPtr& a : e.args) acc = builder.mk_or(acc, compile(*a));
        return acc;
      }
      case Expr::Kind::Implies:
        return builder.mk_implies(compile(*e.args[0]), compile(*e.args[1]));
      case Expr::Kind::ExactlyOne: {
        aig::Lit any = aig::lit_false;
        aig::Lit mutex = aig::lit_true;
        for (size_t i = 0; i < e.group.size(); ++i) {
          aig::Lit bi = aig::Lit::make(e.group[i]);
          any = builder.mk_or(any, bi);
          for (size_t j = i + 1; j < e.group.size(); ++j)
            mutex = builder.mk_and(
                mutex, ~builder.mk_and(bi, aig::Lit::make(e.group[j])));
        }
        return builder.mk_and(any, mutex);
      }
    }
    return aig::lit_false;
  }
};

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ':') c = '_';
  return s;
}

}  // namespace

CompiledHelper compile_helper(const aig::Netlist& netlist,
                              const Helper& helper) {
  Compiler c(netlist);
  aig::Lit predicate = c.compile(*helper.predicate);
  size_t idx = c.builder.add_output(~predicate, "mon_" + sanitize(helper.id));
  return {c.builder.build(), idx};
}

namespace {

void collect_roots(const Expr& e, std::set<uint32_t>& out) {
  switch (e.kind) {
    case Expr::Kind::Const:
      break;
    case Expr::Kind::Bit:
    case Expr::Kind::Sticky:
      out.insert(e.signal);
      break;
    case Expr::Kind::Cmp:
      for (uint32_t v : e.lhs.bits) out.insert(v);
      for (uint32_t v : e.rhs.bits) out.insert(v);
      break;
    case Expr::Kind::ExactlyOne:
      for (uint32_t v : e.group) out.insert(v);
      break;
    default:
      for (const ExprPtr& a : e.args) collect_roots(*a, out);
  }
}

}  // namespace

std::vector<uint32_t> predicate_roots(const Helper& helper) {
  std::set<uint32_t> roots;
  collect_roots(*helper.predicate, roots);
  return {roots.begin(), roots.end()};
}

}  // namespace hintmc
