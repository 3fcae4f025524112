#include "hintmc/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hintmc {

namespace {

using nlohmann::json;

json flag_to_json(const FlagRef& f) {
  return {{"signal", f.signal}, {"active_low", f.active_low}};
}

FlagRef flag_from_json(const json& j) {
  FlagRef f;
  f.signal = j.at("signal").get<std::string>();
  f.active_low = j.value("active_low", false);
  return f;
}

// Resolves a signal name to a latch or input variable.
std::optional<uint32_t> resolve_signal(const aig::Netlist& n,
                                       const std::string& name) {
  if (auto v = n.find_latch(name)) return v;
  if (auto v = n.find_input(name)) return v;
  return std::nullopt;
}

void check_acyclic(const std::vector<OrderEntry>& orders,
                   const std::string& what) {
  std::map<std::string, std::vector<std::string>> succ;
  std::set<std::string> nodes;
  for (const OrderEntry& o : orders) {
    succ[o.before].push_back(o.after);
    nodes.insert(o.before);
    nodes.insert(o.after);
  }
  std::map<std::string, int> mark;  // 0 unseen, 1 on stack, 2 done
  for (const std::string& start : nodes) {
    if (mark[start]) continue;
    std::vector<std::pair<std::string, size_t>> stack{{start, 0}};
    mark[start] = 1;
    while (!stack.empty()) {
      auto& [node, idx] = stack.back();
      auto& edges = succ[node];
      if (idx < edges.size()) {
        const std::string& next = edges[idx++];
        if (mark[next] == 1)
          throw std::runtime_error("manifest " + what +
                                   " contain a cycle through '" + next + "'");
        if (mark[next] == 0) {
          mark[next] = 1;
          stack.push_back({next, 0});
        }
      } else {
        mark[node] = 2;
        stack.pop_back();
      }
    }
  }
}

}  // namespace

std::string Manifest::to_json() const {
  json j;
  j["fsms"] = json::array();
  for (const auto& f : fsms)
    j["fsms"].push_back({{"group", f.group}, {"encoding", f.encoding}});
  j["fifos"] = json::array();
  for (const auto& f : fifos)
    j["fifos"].push_back({{"name", f.name},
                          {"pointer", f.pointer},
                          {"depth", f.depth},
                          {"full", flag_to_json(f.full)},
                          {"empty", flag_to_json(f.empty)}});
  j["pipelines"] = json::array();
  for (const auto& p : pipelines)
    j["pipelines"].push_back(
        {{"name", p.name}, {"enables", p.enables}, {"exits", p.exits}});
  j["loops"] = json::array();
  for (const auto& l : loops) {
    json e = {{"name", l.name},
              {"variable", l.variable},
              {"trip_count", l.trip_count}};
    if (!l.pipeline.empty()) e["pipeline"] = l.pipeline;
    j["loops"].push_back(std::move(e));
  }
  j["loop_orders"] = json::array();
  for (const auto& o : loop_orders)
    j["loop_orders"].push_back({{"before", o.before}, {"after", o.after}});
  j["functions"] = json::array();
  for (const auto& f : functions) {
    json e = {{"name", f.name},
              {"start", f.start},
              {"done", f.done},
              {"idle", f.idle}};
    if (!f.ready.empty()) e["ready"] = f.ready;
    j["functions"].push_back(std::move(e));
  }
  j["function_orders"] = json::array();
  for (const auto& o : function_orders)
    j["function_orders"].push_back({{"before", o.before}, {"after", o.after}});
  return j.dump(2);
}

Manifest Manifest::from_json(std::string_view text) {
  json j = json::parse(text);
  Manifest m;
  for (const auto& e : j.value("fsms", json::array())) {
    FsmEntry f;
    f.group = e.at("group").get<std::string>();
    f.encoding = e.value("encoding", "onehot");
    if (f.encoding != "onehot")
      throw std::runtime_error("unsupported fsm encoding: " + f.encoding);
    m.fsms.push_back(std::move(f));
  }
  for (const auto& e : j.value("fifos", json::array())) {
    FifoEntry f;
    f.pointer = e.at("pointer").get<std::string>();
    f.name = e.value("name", f.pointer);
    f.depth = e.at("depth").get<uint64_t>();
    f.full = flag_from_json(e.at("full"));
    f.empty = flag_from_json(e.at("empty"));
    m.fifos.push_back(std::move(f));
  }
  for (const auto& e : j.value("pipelines", json::array())) {
    PipelineEntry p;
    p.name = e.at("name").get<std::string>();
    p.enables = e.at("enables").get<std::vector<std::string>>();
    p.exits = e.value("exits", std::vector<std::string>{});
    m.pipelines.push_back(std::move(p));
  }
  for (const auto& e : j.value("loops", json::array())) {
    LoopEntry l;
    l.name = e.at("name").get<std::string>();
    l.variable = e.at("variable").get<std::string>();
    l.trip_count = e.at("trip_count").get<uint64_t>();
    l.pipeline = e.value("pipeline", "");
    m.loops.push_back(std::move(l));
  }
  for (const auto& e : j.value("loop_orders", json::array()))
    m.loop_orders.push_back(
        {e.at("before").get<std::string>(), e.at("after").get<std::string>()});
  for (const auto& e : j.value("functions", json::array())) {
    FunctionEntry f;
    f.name = e.at("name").get<std::string>();
    f.start = e.at("start").get<std::string>();
    f.done = e.at("done").get<std::string>();
    f.idle = e.at("idle").get<std::string>();
    f.ready = e.value("ready", "");
    m.functions.push_back(std::move(f));
  }
  for (const auto& e : j.value("function_orders", json::array()))
    m.function_orders.push_back(
        {e.at("before").get<std::string>(), e.at("after").get<std::string>()});
  return m;
}

Manifest Manifest::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void Manifest::validate(const aig::Netlist& netlist) const {
  std::map<std::string, aig::SignalGroup> groups;
  for (aig::SignalGroup& g : netlist.build_groups()) groups[g.name] = g;
  auto need_group = [&](const std::string& name, const char* what) {
    if (!groups.count(name))
      throw std::runtime_error(std::string(what) +
                               " references unknown group '" + name + "'");
  };
  auto need_signal = [&](const std::string& name, const char* what) {
    if (!resolve_signal(netlist, name))
      throw std::runtime_error(std::string(what) +
                               " references unknown signal '" + name + "'");
  };
  for (const auto& f : fsms) need_group(f.group, "fsm");
  std::set<std::string> pipeline_names;
  for (const auto& p : pipelines) {
    pipeline_names.insert(p.name);
    for (const auto& s : p.enables)
      if (!netlist.find_latch(s))
        throw std::runtime_error("pipeline enable '" + s + "' is not a latch");
    for (const auto& s : p.exits)
      if (!netlist.find_latch(s))
        throw std::runtime_error("pipeline exit '" + s + "' is not a latch");
  }
  for (const auto& f : fifos) {
    need_group(f.pointer, "fifo pointer");
    need_signal(f.full.signal, "fifo full flag");
    need_signal(f.empty.signal, "fifo empty flag");
  }
  std::set<std::string> loop_names;
  for (const auto& l : loops) {
    loop_names.insert(l.name);
    need_group(l.variable, "loop variable");
    if (!l.pipeline.empty() && !pipeline_names.count(l.pipeline))
      throw std::runtime_error("loop '" + l.name +
                               "' references unknown pipeline '" + l.pipeline +
                               "'");
  }
  std::set<std::string> function_names;
  for (const auto& f : functions) {
    function_names.insert(f.name);
    need_signal(f.start, "function start");
    need_signal(f.done, "function done");
    need_signal(f.idle, "function idle");
    if (!f.ready.empty()) need_signal(f.ready, "function ready");
  }
  for (const auto& o : loop_orders)
    if (!loop_names.count(o.before) || !loop_names.count(o.after))
      throw std::runtime_error("loop order references unknown loop");
  for (const auto& o : function_orders)
    if (!function_names.count(o.before) || !function_names.count(o.after))
      throw std::runtime_error("function order references unknown function");
  check_acyclic(loop_orders, "loop orders");
  check_acyclic(function_orders, "function orders");
}

Manifest infer_manifest(const aig::Netlist& netlist,
                        std::vector<std::string>* diags) {
  Manifest m;
  std::vector<aig::SignalGroup> groups = netlist.build_groups(diags);

  // FSM state registers: "ap_CS_fsm" bases, possibly behind an instance
  // prefix.
  for (const auto& g : groups) {
    size_t pos = g.name.rfind("ap_CS_fsm");
    if (pos != std::string::npos && pos + 9 == g.name.size())
      m.fsms.push_back({g.name, "onehot"});
  }

  // Pipeline stage enables: ap_enable_reg_pp<k>_iter<j>, grouped by the
  // (prefix, k) pair and ordered by j.
  static const std::regex enable_re(
      "^(?:(.*)_)?ap_enable_reg_pp([0-9]+)_iter([0-9]+)$");
  std::map<std::pair<std::string, unsigned>, std::map<unsigned, std::string>>
      stages;
  for (const std::string& name : netlist.latch_names()) {
    std::smatch match;
    if (std::regex_match(name, match, enable_re)) {
      unsigned k = static_cast<unsigned>(std::stoul(match[2]));
      unsigned j = static_cast<unsigned>(std::stoul(match[3]));
      auto& chain = stages[{match[1].str(), k}];
      if (!chain.emplace(j, name).second && diags)
        diags->push_back("pipeline pp" + std::to_string(k) +
                         ": duplicate iter index " + std::to_string(j));
    }
  }
  for (const auto& [key, chain] : stages) {
    PipelineEntry p;
    p.name = key.first.empty()
                 ? "pp" + std::to_string(key.second)
                 : key.first + "_pp" + std::to_string(key.second);
    for (const auto& [j, name] : chain) p.enables.push_back(name);
    m.pipelines.push_back(std::move(p));
  }

  // FIFO internals: a "<base>_fifo" cluster exposing the mOutPtr pointer
  // group and active-low full/empty flags. The depth parameter rides on
  // the pointer symbol as a _DEPTH_<d> annotation.
  static const std::regex ptr_re("^(.*_fifo)_mOutPtr(?:_DEPTH_([0-9]+))?$");
  for (const auto& g : groups) {
    std::smatch match;
    if (!std::regex_match(g.name, match, ptr_re)) continue;
    std::string base = match[1];
    FifoEntry f;
    f.name = base;
    f.pointer = g.name;
    std::string full_name = base + "_internal_full_n";
    std::string empty_name = base + "_internal_empty_n";
    if (!resolve_signal(netlist, full_name) ||
        !resolve_signal(netlist, empty_name)) {
      if (diags)
        diags->push_back("fifo '" + base +
                         "': pointer found but full/empty flags missing");
      continue;
    }
    f.full = {full_name, true};
    f.empty = {empty_name, true};
    if (!match[2].matched) {
      if (diags)
        diags->push_back("fifo '" + base +
                         "': no _DEPTH_<d> annotation on the pointer symbol; "
                         "entry skipped (declare it in the manifest)");
      continue;
    }
    f.depth = std::stoull(match[2]);
    m.fifos.push_back(std::move(f));
  }

  // Block-level interfaces: ap_start/ap_done/ap_idle(/ap_ready) per
  // instance prefix; the unprefixed set is the top module.
  std::set<std::string> prefixes;
  auto scan_names = [&](const std::vector<std::string>& names) {
    for (const std::string& name : names) {
      size_t pos = name.rfind("ap_start");
      if (pos != std::string::npos && pos + 8 == name.size())
        prefixes.insert(name.substr(0, pos));
    }
  };
  scan_names(netlist.latch_names());
  scan_names(netlist.input_names());
  for (const std::string& prefix : prefixes) {
    FunctionEntry f;
    f.start = prefix + "ap_start";
    f.done = prefix + "ap_done";
    f.idle = prefix + "ap_idle";
    if (!resolve_signal(netlist, f.done) || !resolve_signal(netlist, f.idle)) {
      if (diags)
        diags->push_back("interface '" + prefix +
                         "ap_start': done/idle signals missing");
      continue;
    }
    std::string ready = prefix + "ap_ready";
    if (resolve_signal(netlist, ready)) f.ready = ready;
    f.name = prefix.empty()
                 ? "top"
                 : (prefix.back() == '_' ? prefix.substr(0, prefix.size() - 1)
                                         : prefix);
    m.functions.push_back(std::move(f));
  }
  return m;
}

}  // namespace hintmc
