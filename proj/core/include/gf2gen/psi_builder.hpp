#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gf2gen/functional.hpp"
#include "gf2gen/htable.hpp"

namespace gf2gen {

/// Record of one completed schedule step.
struct StepRecord {
    int l = 0;                          // step number
    int label = 0;                      // ScheduleItem label
    std::vector<std::uint8_t> sigma;
    int n = 0;                          // chosen column n_l
    int mark_next = 0;                  // N_{l+1}
    std::map<int, int> picks;           // block n -> chosen cell i_n
    std::vector<Constraint> constraints;  // the new constraints of this step
};

/// Closing assignment for one probe block past the last step.
struct TailRecord {
    int n = 0;
    int cell = 0;
    std::uint8_t bit = 0;
};

struct BuildTrace {
    int k = 0;
    Index probe_bound = 0;
    int n0 = 0;                         // N_0
    std::vector<StepRecord> steps;
    std::vector<TailRecord> tail;
};

struct BuildResult {
    Functional psi;
    BuildTrace trace;
};

/// Mutable state of the staged construction. The probe region is the
/// prefix [0, probe_bound) of the ground; within it, block n consists of
/// the k+1 cells n(k+1)+i. Marks N_0 < N_1 < ... bound the blocks whose
/// cells have been committed so far, and e_set is always
///   union(targets) + [0, min(N_s(k+1), probe_bound)) + union(chosen entries).
struct StageState {
    int k = 0;
    Index ground = 0;
    Index probe_bound = 0;
    int claim_budget = 0;
    std::vector<FinVec> targets;        // F^0..F^k
    std::vector<int> marks;             // N_0..N_s, strictly increasing
    std::vector<int> chosen_n;          // n_0..n_{s-1}, strictly increasing
    std::vector<FinVec> chosen_entries; // all table entries committed so far
    FinVec e_set;
    Functional phi;                     // current functional on [0, ground)
    std::vector<StepRecord> steps;
};

/// Smallest n in `search` order for which the singletons of e_set together
/// with {table.entry(i, n) : i < m} are independent.
/// Throws ClaimSearchExhaustedError when no candidate qualifies.
int find_claim_n(const FinVec& e_set, const HTable& table, std::span<const int> search);

/// For each block n in [n_lo, n_hi), the smallest cell i such that the
/// running family (singletons of e_set, the chosen vectors, the previously
/// picked cells and {n(k+1)+i}) stays independent. Succeeds whenever the
/// preconditions hold; throws std::logic_error otherwise.
std::map<int, int> pick_pigeonhole(const FinVec& e_set, std::span<const FinVec> chosen,
                                   int k, int n_lo, int n_hi);

/// Advance the construction by one schedule item: choose the column, bump
/// the mark, pick one cell per fresh block and re-solve the functional
/// under the extension / block / sigma constraints.
StageState stage_advance(const StageState& state, const ScheduleItem& item);

/// Sentinel probe bound: use the whole ground as the block region.
inline constexpr Index kWholeGround = ~Index{0};

/// Run the staged construction: seed with the target constraint, fold the
/// schedule, then close every remaining probe block so that the final
/// functional disagrees with the targets on all blocks past N_0.
///
/// probe_bound is the prefix treated as the block region when the caller
/// embeds the build in a larger space; it defaults to the whole ground.
BuildResult build_psi(int k, std::vector<FinVec> targets,
                      std::span<const ScheduleItem> schedule, Index bound,
                      Index probe_bound = kWholeGround, int claim_budget = 4096);

/// Blocks testable within the probe region: n with n(k+1)+k < probe_bound.
int probe_block_count(int k, Index probe_bound);

/// The set {n < probe blocks : psi(F^i) == psi({n(k+1)+i}) for all i}.
std::vector<int> matching_blocks(const Functional& psi, std::span<const FinVec> targets, int k,
                                 Index probe_bound);

}  // namespace gf2gen
