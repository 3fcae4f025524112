#ifndef HINTMC_MANIFEST_HPP
#define HINTMC_MANIFEST_HPP

#include <optional>
#include <string>
#include <vector>

#include "hintmc/aig.hpp"

namespace hintmc {

// Structured description of a design's HLS control features, standing in
// for compiler reports: state machines, FIFO internals, pipeline stage
// registers, loops with known trip counts, block-level interfaces, and
// declared execution orders.

struct FsmEntry {
  std::string group;
  std::string encoding = "onehot";
};

struct FlagRef {
  std::string signal;
  bool active_low = false;
};

struct FifoEntry {
  std::string name;
  std::string pointer;  // group name of the data pointer
  uint64_t depth = 0;
  FlagRef full;
  FlagRef empty;
};

struct PipelineEntry {
  std::string name;
  std::vector<std::string> enables;  // stage order
  std::vector<std::string> exits;    // stage order, may be empty
};

struct LoopEntry {
  std::string name;
  std::string variable;  // group name of the loop variable register
  uint64_t trip_count = 0;
  std::string pipeline;  // optional reference into pipelines
};

struct OrderEntry {
  std::string before;
  std::string after;
};

struct FunctionEntry {
  std::string name;
  std::string start;
  std::string done;
  std::string idle;
  std::string ready;  // may be empty
};

struct Manifest {
  std::vector<FsmEntry> fsms;
  std::vector<FifoEntry> fifos;
  std::vector<PipelineEntry> pipelines;
  std::vector<LoopEntry> loops;
  std::vector<OrderEntry> loop_orders;
  std::vector<FunctionEntry> functions;
  std::vector<OrderEntry> function_orders;

  bool empty() const {
    return fsms.empty() && fifos.empty() && pipelines.empty() &&
           loops.empty() && loop_orders.empty() && functions.empty() &&
           function_orders.empty();
  }

  std::string to_json() const;
  static Manifest from_json(std::string_view text);
  static Manifest from_file(const std::string& path);

  // Checks that every referenced name resolves against the netlist
  // symbol table and that declared orders are acyclic. Throws
  // std::runtime_error describing the first violation.
  void validate(const aig::Netlist& netlist) const;
};

// Name-convention inference from the symbol table: FSM state groups,
// pipeline stage-enable chains, FIFO internals, and block-level
// interfaces. Orders and loops carry information a netlist cannot
// provide and are never inferred.
Manifest infer_manifest(const aig::Netlist& netlist,
                        std::vector<std::string>* diags = nullptr);

}  // namespace hintmc

#endif
