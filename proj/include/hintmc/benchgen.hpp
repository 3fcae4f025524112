#ifndef HINTMC_BENCHGEN_HPP
#define HINTMC_BENCHGEN_HPP

#include <string>
#include <vector>

#include "hintmc/aig.hpp"
#include "hintmc/manifest.hpp"
#include "hintmc/pdr.hpp"

namespace hintmc::bench {

// Synthetic HLS-shaped benchmarks with golden manifests and embedded
// ground truth, standing in for tool-generated designs at desk scale.
struct BenchSpec {
  enum class Family {
    BoundedCounter,
    Fifo,
    PipelinedLoopPair,
    FunctionChain,
    RandomControl,
  };

  Family family = Family::BoundedCounter;
  uint64_t seed = 0;

  uint64_t trip = 200;     // BoundedCounter: loop trip count
  uint64_t depth = 8;      // Fifo: depth parameter
  bool pops = false;       // Fifo: whether a pop input exists
  uint32_t stages = 3;     // PipelinedLoopPair: pipeline depth
  uint64_t trip2 = 6;      // PipelinedLoopPair: second loop trip count
  uint32_t chain = 3;      // FunctionChain: number of functions
  uint32_t cycles = 4;     // FunctionChain: execution cycles per function
  uint32_t latches = 12;   // RandomControl
  uint32_t inputs = 2;     // RandomControl
  uint32_t gates = 30;     // RandomControl

  std::string name() const;
};

BenchSpec::Family family_from_string(const std::string& s);

struct TargetTruth {
  size_t output = 0;
  std::string name;
  pdr::Verdict verdict = pdr::Verdict::Unknown;
  uint32_t depth = 0;  // shortest violation depth, Counterexample only
};

struct GeneratedBench {
  BenchSpec spec;
  aig::Netlist netlist;
  Manifest manifest;
  std::vector<TargetTruth> targets;
  // generate_helpers output on (netlist, manifest) at generation time:
  // "id\tpretty" lines.
  std::vector<std::string> golden_helpers;
};

// Deterministic per spec/seed. Ground truth is computed by the
// explicit-state oracle at generation time rather than trusted from the
// construction. Throws when parameters exceed the documented desk-scale
// caps.
GeneratedBench gen(const BenchSpec& spec);

struct OracleResult {
  pdr::Verdict verdict = pdr::Verdict::Unknown;
  uint32_t depth = 0;
};

// Breadth-first reachability over all input branches. Exact; requires
// at most 24 latches and 12 inputs.
OracleResult oracle(const aig::Netlist& netlist, size_t target_output);

// Writes model.aag, manifest.json and truth.json into the directory.
void write_bench(const GeneratedBench& bench, const std::string& dir);

// The default shipped suite covering every family at small and typical
// sizes; write_suite adds a suite.json descriptor next to the benchmark
// directories.
std::vector<BenchSpec> default_suite();
void write_suite(const std::string& dir);

std::string truth_to_json(const GeneratedBench& bench);

}  // namespace hintmc::bench

#endif
