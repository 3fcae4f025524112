#include "hintmc/aig.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace hintmc::aig {

namespace {

struct Cursor {
  std::string_view data;
  size_t pos = 0;
  size_t line = 1;

  bool eof() const { return pos >= data.size(); }
  char peek() const { return data[pos]; }
  char take() {
    char c = data[pos++];
    if (c == '\n') ++line;
    return c;
  }
  void expect_newline() {
    if (eof() || take() != '\n')
      throw ParseError("expected end of line", line);
  }
  uint64_t take_uint() {
    if (eof() || !isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected number", line);
    uint64_t v = 0;
    while (!eof() && isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (take() - '0');
      if (v > 0xffffffffull) throw ParseError("number out of range", line);
    }
    return v;
  }
  void skip_space() {
    if (eof() || take() != ' ') throw ParseError("expected space", line);
  }
  std::string take_rest_of_line() {
    std::string s;
    while (!eof() && peek() != '\n') s.push_back(take());
    if (!eof()) take();
    return s;
  }
};

uint64_t fnv1a(uint64_t h, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t fnv1a(uint64_t h, std::string_view s) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

Netlist::Netlist(uint32_t max_var, std::vector<uint32_t> inputs,
                 std::vector<Latch> latches, std::vector<Gate> gates,
                 std::vector<Lit> outputs,
                 std::vector<std::string> input_names,
                 std::vector<std::string> latch_names,
                 std::vector<std::string> output_names,
                 std::vector<std::string> comments)
    : max_var_(max_var),
      inputs_(std::move(inputs)),
      latches_(std::move(latches)),
      gates_(std::move(gates)),
      outputs_(std::move(outputs)),
      input_names_(std::move(input_names)),
      latch_names_(std::move(latch_names)),
      output_names_(std::move(output_names)),
      comments_(std::move(comments)) {
  kinds_.assign(max_var_ + 1, NodeKind::Constant);
  class_index_.assign(max_var_ + 1, 0);
  auto define = [&](uint32_t var, NodeKind k, uint32_t idx) {
    if (var == 0 || var > max_var_)
      throw std::invalid_argument("variable out of range: " +
                                  std::to_string(var));
    if (kinds_[var] != NodeKind::Constant)
      throw std::invalid_argument("duplicate definition of variable " +
                                  std::to_string(var));
    kinds_[var] = k;
    class_index_[var] = idx;
  };
  for (uint32_t i = 0; i < inputs_.size(); ++i)
    define(inputs_[i], NodeKind::Input, i);
  for (uint32_t i = 0; i < latches_.size(); ++i)
    define(latches_[i].var, NodeKind::Latch, i);
  for (uint32_t i = 0; i < gates_.size(); ++i)
    define(gates_[i].var, NodeKind::Gate, i);
  validate();
}

void Netlist::validate() const {
  auto check_ref = [&](Lit l, const char* where) {
    if (l.var() > max_var_ || (l.var() != 0 && kinds_[l.var()] == NodeKind::Constant))
      throw std::invalid_argument(std::string("dangling literal in ") + where +
                                  ": " + std::to_string(l.code()));
  };
  for (const Gate& g : gates_) {
    check_ref(g.rhs0, "gate");
    check_ref(g.rhs1, "gate");
    // Acyclicity: both operands must be defined at a smaller node index.
    if (g.rhs0.var() >= g.var || g.rhs1.var() >= g.var)
      throw std::invalid_argument(
          "gate " + std::to_string(g.var) +
          " references an operand with a larger or equal index");
  }
  for (const Latch& l : latches_) check_ref(l.next, "latch next-state");
  for (Lit o : outputs_) check_ref(o, "output");
  if (input_names_.size() != inputs_.size() ||
      latch_names_.size() != latches_.size() ||
      output_names_.size() != outputs_.size())
    throw std::invalid_argument("symbol table size mismatch");
  auto check_unique = [](const std::vector<std::string>& names,
                         const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const std::string& n : names)
      if (!seen.insert(n).second)
        throw std::invalid_argument(std::string("duplicate ") + what +
                                    " symbol: " + n);
  };
  check_unique(input_names_, "input");
  check_unique(latch_names_, "latch");
  check_unique(output_names_, "output");
}

Netlist Netlist::parse(std::string_view data) {
  Cursor c{data};
  if (data.substr(0, 4) != "aag " && data.substr(0, 4) != "aig ")
    throw ParseError("missing aag/aig header", 1);
  bool binary = data[1] == 'i';
  c.pos = 4;
  uint64_t m = c.take_uint();
  c.skip_space();
  uint64_t ni = c.take_uint();
  c.skip_space();
  uint64_t nl = c.take_uint();
  c.skip_space();
  uint64_t no = c.take_uint();
  c.skip_space();
  uint64_t na = c.take_uint();
  if (!c.eof() && c.peek() == ' ')
    throw ParseError(
        "extended header sections (bad/constraint/justice/fairness) are not "
        "supported; only AIGER format version 1 is accepted",
        1);
  c.expect_newline();
  if (binary && m != ni + nl + na)
    throw ParseError("binary header requires M = I+L+A", 1);

  std::vector<uint32_t> inputs;
  std::vector<Latch> latches;
  std::vector<Gate> gates;
  std::vector<Lit> outputs;

  auto lit_of = [&](uint64_t code) {
    if (code > 2 * m + 1)
      throw ParseError("literal " + std::to_string(code) + " exceeds maxvar",
                       c.line);
    return Lit::from_code(static_cast<uint32_t>(code));
  };

  if (!binary) {
    for (uint64_t i = 0; i < ni; ++i) {
      uint64_t l = c.take_uint();
      if (l < 2 || (l & 1))
        throw ParseError("input literal must be positive and even", c.line);
      inputs.push_back(lit_of(l).var());
      c.expect_newline();
    }
    for (uint64_t i = 0; i < nl; ++i) {
      uint64_t l = c.take_uint();
      if (l < 2 || (l & 1))
        throw ParseError("latch literal must be positive and even", c.line);
      c.skip_space();
      uint64_t next = c.take_uint();
      if (!c.eof() && c.peek() == ' ')
        throw ParseError(
            "latch reset values are an AIGER 1.9 extension; format version 1 "
            "resets every latch to 0",
            c.line);
      latches.push_back({lit_of(l).var(), lit_of(next)});
      c.expect_newline();
    }
    for (uint64_t i = 0; i < no; ++i) {
      outputs.push_back(lit_of(c.take_uint()));
      c.expect_newline();
    }
    for (uint64_t i = 0; i < na; ++i) {
      uint64_t lhs = c.take_uint();
      if (lhs < 2 || (lhs & 1))
        throw ParseError("and literal must be positive and even", c.line);
      c.skip_space();
      uint64_t r0 = c.take_uint();
      c.skip_space();
      uint64_t r1 = c.take_uint();
      gates.push_back({lit_of(lhs).var(), lit_of(r0), lit_of(r1)});
      c.expect_newline();
    }
  } else {
    for (uint64_t i = 0; i < ni; ++i)
      inputs.push_back(static_cast<uint32_t>(i + 1));
    for (uint64_t i = 0; i < nl; ++i) {
      uint64_t next = c.take_uint();
      if (!c.eof() && c.peek() == ' ')
        throw ParseError("latch reset values are not supported", c.line);
      latches.push_back(
          {static_cast<uint32_t>(ni + i + 1), lit_of(next)});
      c.expect_newline();
    }
    for (uint64_t i = 0; i < no; ++i) {
      outputs.push_back(lit_of(c.take_uint()));
      c.expect_newline();
    }
    auto take_delta = [&]() -> uint64_t {
      uint64_t x = 0;
      int shift = 0;
      while (true) {
        if (c.eof()) throw ParseError("truncated binary and section", c.line);
        unsigned char ch = static_cast<unsigned char>(c.take());
        x |= uint64_t(ch & 0x7f) << shift;
        if (!(ch & 0x80)) break;
        shift += 7;
        if (shift > 63) throw ParseError("delta overflow", c.line);
      }
      return x;
    };
    for (uint64_t i = 0; i < na; ++i) {
      uint64_t lhs = 2 * (ni + nl + i + 1);
      uint64_t d0 = take_delta();
      uint64_t d1 = take_delta();
      if (d0 > lhs || d1 > lhs - d0)
        throw ParseError("invalid and-gate delta encoding", c.line);
      uint64_t r0 = lhs - d0;
      uint64_t r1 = r0 - d1;
      gates.push_back({static_cast<uint32_t>(lhs >> 1), lit_of(r0), lit_of(r1)});
    }
  }

  std::vector<std::string> input_names(ni), latch_names(nl), output_names(no);
  std::vector<bool> have_in(ni), have_la(nl), have_out(no);
  std::vector<std::string> comments;
  while (!c.eof()) {
    char k = c.peek();
    if (k == 'c') {
      c.take();
      if (!c.eof() && c.peek() == '\n') c.take();
      // Comment section runs to end of input, preserved opaquely.
      while (!c.eof()) comments.push_back(c.take_rest_of_line());
      break;
    }
    if (k != 'i' && k != 'l' && k != 'o')
      throw ParseError("unexpected content after definitions", c.line);
    c.take();
    uint64_t pos = c.take_uint();
    c.skip_space();
    std::string name = c.take_rest_of_line();
    if (name.empty()) throw ParseError("empty symbol name", c.line);
    auto set = [&](std::vector<std::string>& names, std::vector<bool>& have,
                   uint64_t count, const char* what) {
      if (pos >= count)
        throw ParseError(std::string(what) + " symbol position out of range",
                         c.line);
      if (have[pos])
        throw ParseError(std::string("duplicate ") + what + " symbol entry",
                         c.line);
      have[pos] = true;
      names[pos] = std::move(name);
    };
    if (k == 'i')
      set(input_names, have_in, ni, "input");
    else if (k == 'l')
      set(latch_names, have_la, nl, "latch");
    else
      set(output_names, have_out, no, "output");
  }
  for (uint64_t i = 0; i < ni; ++i)
    if (!have_in[i]) input_names[i] = "i" + std::to_string(i);
  for (uint64_t i = 0; i < nl; ++i)
    if (!have_la[i]) latch_names[i] = "l" + std::to_string(i);
  for (uint64_t i = 0; i < no; ++i)
    if (!have_out[i]) output_names[i] = "o" + std::to_string(i);

  return Netlist(static_cast<uint32_t>(m), std::move(inputs),
                 std::move(latches), std::move(gates), std::move(outputs),
                 std::move(input_names), std::move(latch_names),
                 std::move(output_names), std::move(comments));
}

Netlist Netlist::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Netlist::serialize() const {
  std::ostringstream out;
  out << "aag " << max_var_ << ' ' << inputs_.size() << ' ' << latches_.size()
      << ' ' << outputs_.size() << ' ' << gates_.size() << '\n';
  for (uint32_t v : inputs_) out << (v << 1) << '\n';
  for (const Latch& l : latches_)
    out << (l.var << 1) << ' ' << l.next.code() << '\n';
  for (Lit o : outputs_) out << o.code() << '\n';
  for (const Gate& g : gates_)
    out << (g.var << 1) << ' ' << g.rhs0.code() << ' ' << g.rhs1.code()
        << '\n';
  // Names equal to the synthesized defaults are not written back.
  auto emit = [&](char kind, size_t i, const std::string& name) {
    if (name != std::string(1, kind) + std::to_string(i))
      out << kind << i << ' ' << name << '\n';
  };
  for (size_t i = 0; i < input_names_.size(); ++i)
    emit('i', i, input_names_[i]);
  for (size_t i = 0; i < latch_names_.size(); ++i)
    emit('l', i, latch_names_[i]);
  for (size_t i = 0; i < output_names_.size(); ++i)
    emit('o', i, output_names_[i]);
  if (!comments_.empty()) {
    out << "c\n";
    for (const std::string& line : comments_) out << line << '\n';
  }
  return out.str();
}

std::optional<uint32_t> Netlist::find_latch(std::string_view name) const {
  for (size_t i = 0; i < latch_names_.size(); ++i)
    if (latch_names_[i] == name) return latches_[i].var;
  return std::nullopt;
}

std::optional<uint32_t> Netlist::find_input(std::string_view name) const {
  for (size_t i = 0; i < input_names_.size(); ++i)
    if (input_names_[i] == name) return inputs_[i];
  return std::nullopt;
}

std::optional<size_t> Netlist::find_output(std::string_view name) const {
  for (size_t i = 0; i < output_names_.size(); ++i)
    if (output_names_[i] == name) return i;
  return std::nullopt;
}

std::vector<bool> Netlist::eval_nodes(const std::vector<bool>& state,
                                      const std::vector<bool>& inputs) const {
  if (state.size() != latches_.size())
    throw std::invalid_argument("state arity mismatch");
  if (inputs.size() != inputs_.size())
    throw std::invalid_argument("input assignment arity mismatch");
  std::vector<bool> val(max_var_ + 1, false);
  for (size_t i = 0; i < inputs_.size(); ++i) val[inputs_[i]] = inputs[i];
  for (size_t i = 0; i < latches_.size(); ++i) val[latches_[i].var] = state[i];
  // Gates are index-ordered, so one forward pass settles every node.
  for (const Gate& g : gates_)
    val[g.var] = value_of(g.rhs0, val) && value_of(g.rhs1, val);
  return val;
}

std::vector<bool> Netlist::eval_outputs(const std::vector<bool>& state,
                                        const std::vector<bool>& inputs) const {
  std::vector<bool> val = eval_nodes(state, inputs);
  std::vector<bool> out(outputs_.size());
  for (size_t i = 0; i < outputs_.size(); ++i) out[i] = value_of(outputs_[i], val);
  return out;
}

std::vector<bool> Netlist::next_state(const std::vector<bool>& state,
                                      const std::vector<bool>& inputs) const {
  std::vector<bool> val = eval_nodes(state, inputs);
  std::vector<bool> next(latches_.size());
  for (size_t i = 0; i < latches_.size(); ++i)
    next[i] = value_of(latches_[i].next, val);
  return next;
}

std::vector<SimStep> Netlist::simulate(
    const std::vector<std::vector<bool>>& trace) const {
  std::vector<SimStep> steps;
  std::vector<bool> state(latches_.size(), false);
  if (trace.empty()) {
    std::vector<bool> zero_in(inputs_.size(), false);
    steps.push_back({state, eval_outputs(state, zero_in)});
    return steps;
  }
  for (const std::vector<bool>& in : trace) {
    std::vector<bool> val = eval_nodes(state, in);
    SimStep step;
    step.state = state;
    step.outputs.resize(outputs_.size());
    for (size_t i = 0; i < outputs_.size(); ++i)
      step.outputs[i] = value_of(outputs_[i], val);
    steps.push_back(std::move(step));
    std::vector<bool> next(latches_.size());
    for (size_t i = 0; i < latches_.size(); ++i)
      next[i] = value_of(latches_[i].next, val);
    state = std::move(next);
  }
  return steps;
}

std::vector<uint32_t> Netlist::tfi_registers(
    std::span<const uint32_t> roots) const {
  std::vector<bool> visited(max_var_ + 1, false);
  std::vector<uint32_t> stack;
  for (uint32_t r : roots) {
    if (r > max_var_) throw std::invalid_argument("tfi root out of range");
    if (!visited[r]) {
      visited[r] = true;
      stack.push_back(r);
    }
  }
  std::vector<uint32_t> result;
  auto visit = [&](uint32_t v) {
    if (!visited[v]) {
      visited[v] = true;
      stack.push_back(v);
    }
  };
  while (!stack.empty()) {
    uint32_t v = stack.back();
    stack.pop_back();
    switch (kinds_[v]) {
      case NodeKind::Constant:
        break;
      case NodeKind::Input:
        result.push_back(v);
        break;
      case NodeKind::Latch:
        result.push_back(v);
        visit(latch_of(v).next.var());
        break;
      case NodeKind::Gate: {
        const Gate& g = gate_of(v);
        visit(g.rhs0.var());
        visit(g.rhs1.var());
        break;
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

namespace {

// Splits a latch symbol into (base, bit index). Bracket form "name[3]"
// takes precedence over the underscore form "name_3".
std::optional<std::pair<std::string, uint32_t>> split_bit_suffix(
    const std::string& name) {
  if (name.size() >= 3 && name.back() == ']') {
    size_t open = name.rfind('[');
    if (open != std::string::npos && open + 2 <= name.size() - 1) {
      std::string_view digits(name.data() + open + 1,
                              name.size() - open - 2);
      uint32_t idx = 0;
      auto [p, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), idx);
      if (ec == std::errc() && p == digits.data() + digits.size() &&
          !digits.empty() && open > 0)
        return std::make_pair(name.substr(0, open), idx);
    }
  }
  size_t us = name.rfind('_');
  if (us != std::string::npos && us > 0 && us + 1 < name.size()) {
    std::string_view digits(name.data() + us + 1, name.size() - us - 1);
    uint32_t idx = 0;
    auto [p, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (ec == std::errc() && p == digits.data() + digits.size())
      return std::make_pair(name.substr(0, us), idx);
  }
  return std::nullopt;
}

}  // namespace

std::vector<SignalGroup> Netlist::build_groups(
    std::vector<std::string>* diags) const {
  struct Partial {
    size_t first_seen;
    std::map<uint32_t, uint32_t> bits;  // index -> latch var
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, Partial> partials;
  for (size_t i = 0; i < latches_.size(); ++i) {
    std::string base;
    uint32_t idx = 0;
    if (auto split = split_bit_suffix(latch_names_[i])) {
      base = split->first;
      idx = split->second;
    } else {
      base = latch_names_[i];
    }
    auto it = partials.find(base);
    if (it == partials.end()) {
      it = partials.emplace(base, Partial{order.size(), {}}).first;
      order.push_back(base);
    }
    auto [bit_it, fresh] = it->second.bits.emplace(idx, latches_[i].var);
    if (!fresh && diags)
      diags->push_back("group '" + base + "': duplicate bit index " +
                       std::to_string(idx) + " (keeping first occurrence)");
  }
  std::vector<SignalGroup> groups;
  groups.reserve(order.size());
  for (const std::string& base : order) {
    const Partial& p = partials.at(base);
    SignalGroup g;
    g.name = base;
    for (auto [idx, var] : p.bits) g.bits.push_back(var);
    groups.push_back(std::move(g));
  }
  return groups;
}

uint64_t Netlist::hash() const {
  uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, max_var_);
  h = fnv1a(h, inputs_.size());
  h = fnv1a(h, latches_.size());
  h = fnv1a(h, gates_.size());
  h = fnv1a(h, outputs_.size());
  for (uint32_t v : inputs_) h = fnv1a(h, v);
  for (const Latch& l : latches_) {
    h = fnv1a(h, l.var);
    h = fnv1a(h, l.next.code());
  }
  for (const Gate& g : gates_) {
    h = fnv1a(h, g.var);
    h = fnv1a(h, (uint64_t(g.rhs0.code()) << 32) | g.rhs1.code());
  }
  for (Lit o : outputs_) h = fnv1a(h, o.code());
  for (const std::string& n : input_names_) h = fnv1a(h, n);
  for (const std::string& n : latch_names_) h = fnv1a(h, n);
  for (const std::string& n : output_names_) h = fnv1a(h, n);
  return h;
}

NetlistBuilder::NetlistBuilder(const Netlist& base)
    : next_var_(base.max_var() + 1),
      inputs_(base.inputs()),
      latches_(base.latches()),
      gates_(base.gates()),
      outputs_(base.outputs()),
      input_names_(base.input_names()),
      latch_names_(base.latch_names()),
      output_names_(base.output_names()),
      comments_(base.comments()) {
  for (const Gate& g : gates_)
    strash_.emplace(std::make_pair(g.rhs0.code(), g.rhs1.code()), g.var);
}

Lit NetlistBuilder::add_input(std::string name) {
  uint32_t var = next_var_++;
  inputs_.push_back(var);
  input_names_.push_back(std::move(name));
  return Lit::make(var);
}

Lit NetlistBuilder::add_latch(std::string name) {
  uint32_t var = next_var_++;
  latches_.push_back({var, lit_false});
  latch_names_.push_back(std::move(name));
  pending_latches_.insert(var);
  return Lit::make(var);
}

void NetlistBuilder::set_next(Lit latch, Lit next) {
  for (Latch& l : latches_) {
    if (l.var == latch.var()) {
      if (latch.negated())
        throw std::invalid_argument("set_next expects a positive latch literal");
      l.next = next;
      pending_latches_.erase(l.var);
      return;
    }
  }
  throw std::invalid_argument("set_next: not a latch variable");
}

size_t NetlistBuilder::add_output(Lit l, std::string name) {
  outputs_.push_back(l);
  output_names_.push_back(std::move(name));
  return outputs_.size() - 1;
}

Lit NetlistBuilder::mk_and(Lit a, Lit b) {
  if (a.is_false() || b.is_false()) return lit_false;
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a == b) return a;
  if (a == ~b) return lit_false;
  if (a.code() > b.code()) std::swap(a, b);
  auto key = std::make_pair(a.code(), b.code());
  if (auto it = strash_.find(key); it != strash_.end())
    return Lit::make(it->second);
  uint32_t var = next_var_++;
  gates_.push_back({var, a, b});
  strash_.emplace(key, var);
  return Lit::make(var);
}

Lit NetlistBuilder::mk_xor(Lit a, Lit b) {
  return mk_or(mk_and(a, ~b), mk_and(~a, b));
}

Lit NetlistBuilder::mk_and(std::span<const Lit> ls) {
  Lit acc = lit_true;
  for (Lit l : ls) acc = mk_and(acc, l);
  return acc;
}

Lit NetlistBuilder::mk_or(std::span<const Lit> ls) {
  Lit acc = lit_false;
  for (Lit l : ls) acc = mk_or(acc, l);
  return acc;
}

Netlist NetlistBuilder::build() {
  if (!pending_latches_.empty())
    throw std::logic_error("latch without next-state function");
  return Netlist(next_var_ - 1, inputs_, latches_, gates_, outputs_,
                 input_names_, latch_names_, output_names_, comments_);
}

}  // namespace hintmc::aig
