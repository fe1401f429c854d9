#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gf2gen/basis_map.hpp"
#include "gf2gen/functional.hpp"
#include "gf2gen/htable.hpp"
#include "gf2gen/psi_builder.hpp"

namespace gf2gen {

/// Run parameters for the staged construction of the generator matrix.
struct DriverConfig {
    int k = 1;                     // power split: blocks have k+1 cells
    Index ground_size = 64;        // number of generator rows
    Index base = 4;                // stages below `base` are transcription only
    Index stages = 8;              // columns built; base <= stages <= ground_size
    int repetition = 3;            // realizations demanded per (table, sigma)
    int claim_budget = 4096;       // candidate columns tried per schedule step
    int pattern_width = 2;         // row-pattern window width checked
    int density_budget = 4;        // max (window width) * m enumerated per table
    Index min_codimension = 0;     // required room over a task's vector family
    int combo_search_limit = 3;    // max combo size when searching box members
    int family_samples = 50;       // random families for the transfer check
    std::uint64_t seed = 1;

    /// Throws ValidationError when the invariants do not hold
    /// (base >= 2, base <= stages <= ground_size, stages*(k+1) <= ground_size).
    void validate() const;
};

/// Row-wise target bits: row xi (base <= xi < ground) has exactly xi bits
/// and prescribes column values of generator row xi above its own stage.
class TMatrix {
public:
    TMatrix() = default;
    TMatrix(Index base, Index ground, std::vector<std::vector<std::uint8_t>> rows);

    Index base() const { return base_; }
    Index ground() const { return ground_; }
    bool has_row(Index xi) const { return xi >= base_ && xi < ground_; }
    std::uint8_t bit(Index xi, Index alpha) const;  // pre: has_row(xi), alpha < xi
    const std::vector<std::uint8_t>& row(Index xi) const;

private:
    Index base_ = 0, ground_ = 0;
    std::vector<std::vector<std::uint8_t>> rows_;
};

/// Generate a TMatrix whose rows at and above `stages` make every bit
/// pattern of width <= pattern_width appear on every column window inside
/// [0, stages). The remaining bits are seeded pseudorandom. Throws
/// ValidationError when ground - stages rows cannot cover the patterns.
TMatrix make_pattern_complete_tmatrix(const DriverConfig& cfg);

/// Task attached to one stage: an ordered independent vector family and the
/// k+1 targets the stage functional must separate from it.
struct FTask {
    std::vector<FinVec> vectors;
    std::vector<FinVec> targets;  // F^0..F^k
};

struct StageAssignment {
    std::optional<HTable> h_table;
    std::optional<FTask> f_task;
};

using AssignmentMap = std::map<Index, StageAssignment>;

/// x[xi][alpha] = psi_alpha({xi}): rows are generators, columns stages.
struct GeneratorMatrix {
    Index rows = 0, cols = 0;
    std::vector<std::vector<std::uint8_t>> x;

    std::uint8_t bit(Index xi, Index alpha) const { return x.at(xi).at(alpha); }
};

/// One planned schedule step of a stage build (echoed into the trace).
struct PlannedItem {
    Index table_stage = 0;             // stage the table is assigned to
    std::vector<std::uint8_t> sigma;
    std::vector<int> candidates;       // empty = whole column set
};

struct StageOutcome {
    Functional psi;                    // total on [0, ground_size)
    BuildTrace trace;
    std::vector<PlannedItem> schedule;
    Index probe_bound = 0;             // task family size used as probe region
};

/// Functionals for the stages below base: zero on singletons below base,
/// transcribed from the TMatrix above it.
std::vector<Functional> init_base(const DriverConfig& cfg, const TMatrix& t);

/// Deterministic schedule for one stage: every assigned table at or below
/// `gamma`, steered per history class while the window fits the density
/// budget and topped up to `repetition` realizations per sigma.
std::vector<PlannedItem> plan_stage_schedule(Index gamma, std::span<const Functional> prior,
                                             const AssignmentMap& assignments,
                                             const DriverConfig& cfg);

/// Build the stage functional: reduce through the stage task's family,
/// run the staged construction against the planned schedule, pull back and
/// extend with the TMatrix transcription above the stage.
StageOutcome run_stage(Index gamma, std::span<const Functional> prior,
                       const AssignmentMap& assignments, const TMatrix& t,
                       const DriverConfig& cfg);

struct DriverRun {
    std::vector<Functional> psis;          // one per stage < cfg.stages
    std::vector<std::optional<StageOutcome>> outcomes;  // per stage; none below base
};

/// base functionals + every stage in order.
DriverRun run_driver(const DriverConfig& cfg, const TMatrix& t, const AssignmentMap& assignments);

GeneratorMatrix extract_generators(std::span<const Functional> psis, Index ground_size);

/// Validate one assignment against its stage: support bounds, family
/// independence, codimension. Throws ScheduleSupportError,
/// DependentFamilyError or CodimensionError.
void validate_assignment(Index stage, const StageAssignment& a, const DriverConfig& cfg);

}  // namespace gf2gen
