#ifndef HINTMC_PDR_HPP
#define HINTMC_PDR_HPP

#include <chrono>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hintmc/aig.hpp"
#include "hintmc/sat.hpp"

namespace hintmc::pdr {

// Cubes (conjunctions) and clauses (disjunctions) over latch literals,
// kept sorted by literal code.
using Cube = std::vector<aig::Lit>;
using Clause = std::vector<aig::Lit>;
using Trace = std::vector<std::vector<bool>>;

inline std::vector<aig::Lit> negate_lits(std::vector<aig::Lit> ls) {
  for (aig::Lit& l : ls) l = ~l;
  return ls;
}

// The initial state assigns 0 to every latch, so a cube excludes it
// exactly when it contains a positive literal.
inline bool excludes_init(const Cube& cube) {
  for (aig::Lit l : cube)
    if (!l.negated()) return true;
  return false;
}

bool is_tautology(const Clause& c);

enum class Verdict : uint8_t { Proof, Counterexample, Unknown };

const char* to_string(Verdict v);

struct PdrStats {
  uint64_t sat_queries = 0;
  uint64_t ctis = 0;
  uint64_t ctgs = 0;
  uint64_t clauses_learned = 0;
  uint32_t frames = 0;
  double elapsed = 0.0;
};

struct Cti {
  uint32_t level = 0;
  Cube cube;
  uint64_t timestamp = 0;
};

// Frame clause sets plus the CTI log of a timed-out run, resumable by a
// later run on the same netlist and target.
struct Checkpoint {
  uint64_t netlist_hash = 0;
  uint32_t latch_count = 0;
  uint32_t target_output = 0;
  uint32_t frontier = 0;  // last fully constructed frame
  std::vector<std::vector<Cube>> blocked;  // per level, 0 unused
  std::vector<Cti> cti_log;
  PdrStats stats;

  std::string to_json() const;
  static Checkpoint from_json(std::string_view text);
};

struct SideloadReport {
  std::vector<Clause> accepted;
  struct Rejection {
    Clause clause;
    std::string failed_check;  // "init" or "step"
  };
  std::vector<Rejection> rejected;
};

struct ProveResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<Clause> invariant;          // Proof only
  Trace trace;                            // Counterexample only
  std::optional<Checkpoint> checkpoint;   // Unknown only
  std::vector<Cti> cti_log;
  PdrStats stats;
  SideloadReport sideload;

  bool is_proof() const { return verdict == Verdict::Proof; }
  bool is_cex() const { return verdict == Verdict::Counterexample; }
};

constexpr double kNoTimeout = 1e30;

// IC3/PDR over a netlist output. Frames are delta-encoded (a cube
// blocked at level k belongs to F_1..F_k) inside a single incremental
// solver with one activation literal per level.
class PdrEngine {
 public:
  PdrEngine(const aig::Netlist& netlist, size_t target_output);

  // Restores frames and statistics from a checkpoint of an earlier run
  // on the identical netlist and target. Throws std::runtime_error on a
  // netlist or target mismatch.
  void restore(const Checkpoint& ckpt);

  // Validates clauses (INIT -> c and INIT & Tr -> c') and installs the
  // accepted subset at level 1.
  SideloadReport sideload(std::span<const Clause> clauses);

  ProveResult run(double timeout_sec = kNoTimeout);

  // Drops literals from the cube while ~cube stays inductive relative to
  // F_{level-1} and keeps excluding the initial state; returns the
  // blocking clause. Counterexamples to generalization are counted, not
  // blocked.
  Clause generalize(Cube cube, uint32_t level);

  // Frame-condition check (debug / checkpoint audit): each clause of
  // F_{i+1} is implied one step from F_i, each frame implies the
  // property. The containment chain F_i -> F_{i+1} holds structurally
  // through the delta encoding.
  bool validate_frames(std::string* why = nullptr);

  const std::vector<Cti>& cti_log() const { return cti_log_; }
  const PdrStats& stats() const { return stats_; }
  uint32_t frontier() const { return frontier_; }

 private:
  struct State {
    Cube latches;
    std::vector<bool> inputs;
    size_t succ = SIZE_MAX;               // SIZE_MAX: successor is bad
    std::vector<bool> bad_inputs;         // final-step inputs (frontier states)
  };

  struct Obligation {
    uint32_t level;
    uint64_t timestamp;
    size_t state;
    bool operator>(const Obligation& o) const {
      return level != o.level ? level > o.level : timestamp > o.timestamp;
    }
  };
  using ObligationQueue =
      std::priority_queue<Obligation, std::vector<Obligation>,
                          std::greater<Obligation>>;

  enum class StepResult : uint8_t { Blocked, CexFound };

  sat::Status solve_counted(std::span<const sat::Lit> assumptions);
  std::vector<sat::Lit> frame_assumptions(uint32_t level) const;
  void ensure_frame(uint32_t level);
  void add_blocked_cube(uint32_t level, const Cube& cube);

  // F_level & ~cube & Tr & cube'. On UNSAT fills core (subset of cube,
  // initiation-repaired); on SAT and want_pred, extracts the lifted
  // predecessor state.
  sat::Status consecution(uint32_t level, const Cube& cube, Cube* core,
                          size_t* pred_state, size_t succ_state);

  size_t extract_state(size_t succ_state);
  size_t lift_state(size_t raw_state);

  StepResult strengthen();
  StepResult handle_obligations(ObligationQueue& queue);
  bool propagate(uint32_t* fixpoint_level);

  std::vector<Clause> collect_invariant(uint32_t fixpoint_level) const;
  void verify_invariant_or_abort(const std::vector<Clause>& clauses);
  Trace build_trace(size_t first_state) const;
  Checkpoint make_checkpoint() const;
  bool deadline_passed() const;

  const aig::Netlist& netlist_;
  size_t target_;
  aig::Lit bad_lit_;
  sat::SolverInstance solver_;
  sat::Lit bad_cur_, bad_primed_;
  sat::Var init_act_;
  std::vector<sat::Var> frame_acts_;      // index 0 unused
  std::vector<std::set<Cube>> blocked_;   // index 0 unused
  uint32_t frontier_ = 0;
  std::vector<Cti> cti_log_;
  uint64_t timestamp_counter_ = 0;
  std::vector<State> states_;
  std::optional<Trace> cex_trace_;
  PdrStats stats_;
  std::chrono::steady_clock::time_point run_start_;
  double deadline_ = kNoTimeout;
  bool timeout_flag_ = false;
};

// Single-call form: restores the checkpoint if given, validates and
// side-loads the clauses, then runs with the timeout.
ProveResult pdr(const aig::Netlist& netlist, size_t target_output,
                double timeout_sec, std::span<const Clause> sideload = {},
                const Checkpoint* checkpoint = nullptr);

// Standalone validity filter (fresh solver), kept independent from the
// engine-internal pass so results can be cross-checked.
SideloadReport validate_sideload(const aig::Netlist& netlist,
                                 std::span<const Clause> clauses);

// Checks the three inductive-invariant conditions for clauses & P where
// P is the negation of the target output.
bool verify_invariant(const aig::Netlist& netlist, size_t target_output,
                      std::span<const Clause> clauses,
                      std::string* why = nullptr);

// Replays a trace and reports whether the target output is raised at the
// final step.
bool replays_to_bad(const aig::Netlist& netlist, size_t target_output,
                    const Trace& trace);

// Clause exchange text: one clause per line, literals as symbol names
// with a '-' prefix for negation.
std::string clauses_to_text(const aig::Netlist& netlist,
                            std::span<const Clause> clauses);
std::vector<Clause> clauses_from_text(const aig::Netlist& netlist,
                                      std::string_view text);

std::string trace_to_text(const Trace& trace);
Trace trace_from_text(std::string_view text, size_t num_inputs);

}  // namespace hintmc::pdr

#endif
