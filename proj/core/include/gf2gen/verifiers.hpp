#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gf2gen/driver.hpp"
#include "gf2gen/echelon.hpp"

namespace gf2gen {

/// A basic clopen box in the column space: finitely many coordinates pinned
/// to bits. Nonempty domain by construction.
struct OpenBox {
    std::map<Index, std::uint8_t> pins;

    bool admits(std::span<const std::uint8_t> bits) const;
};

/// A group element named by its generator combination, with the realized
/// column bits (sym_diff of the matrix rows over the combo).
struct GroupElement {
    FinVec combo;
    std::vector<std::uint8_t> bits;
};

GroupElement realize(const GeneratorMatrix& m, const FinVec& combo);

/// FinVec over column indices with bit 1; lets the echelon machinery test
/// independence of realized elements.
FinVec bits_support(std::span<const std::uint8_t> bits);

// --- independence transfer ---------------------------------------------

struct TransferVerdict {
    bool combos_independent = false;
    bool elements_independent = false;
    bool agree = false;
    std::vector<std::size_t> witness;  // dependency witness of whichever side failed
};

/// For each family of combos, compute independence of the combos and of the
/// realized elements and compare. Disagreement signals a dependent row set
/// (truncation too small) or a driver bug; it is reported, never masked.
std::vector<TransferVerdict> independence_transfer_check(
    const GeneratorMatrix& m, std::span<const std::vector<FinVec>> families);

// --- open witness family -------------------------------------------------

/// W_j pins coords[j] to 1 and every earlier coordinate to 0, so any
/// selection across a nonempty set of boxes keeps bit 1 at the smallest
/// selected coordinate. Returns count tuples of k+1 boxes:
/// tuple n = (W_{n(k+1)}, ..., W_{n(k+1)+k}).
std::vector<std::vector<OpenBox>> build_open_family(int k, std::span<const Index> coords,
                                                    int count);

struct SelectionVerdict {
    bool box_violation = false;
    std::size_t violating_selection = 0;  // flat position when box_violation
    bool independent = false;
    std::vector<std::size_t> witness;
};

/// Check every selected element against its box, then test the flattened
/// selection for independence (bit side, and combo side via transfer).
SelectionVerdict selection_independence_check(const GeneratorMatrix& m,
                                              std::span<const std::vector<OpenBox>> family,
                                              std::span<const std::vector<GroupElement>> selections);

// --- non-accumulation ----------------------------------------------------

struct NonAccumulationReport {
    bool matched = false;      // a stage with the given task was found
    Index stage = 0;
    int bound_n0 = 0;          // agreement bound read from the stage trace
    bool verified = false;     // every block past the bound disagrees
    std::vector<int> offending_blocks;
};

/// Locate the stage whose task equals (vectors, targets), read the bound
/// from its trace and re-verify by evaluating the stage functional on every
/// block in range.
NonAccumulationReport non_accumulation_witness(std::span<const Functional> psis,
                                               const AssignmentMap& assignments,
                                               std::span<const std::optional<StageOutcome>> outcomes,
                                               const FTask& task, int k);

// --- window density ------------------------------------------------------

struct DensityReport {
    bool pass = false;
    /// Realizing column per target tuple, keyed by the concatenated target
    /// bits (component-major).
    std::map<std::vector<std::uint8_t>, int> realizing;
    std::vector<std::vector<std::uint8_t>> missing;
};

/// Every tuple in ({0,1}^[beta,gamma_end))^m must be realized by some table
/// column under eval_interval; a width-zero window is vacuously dense.
/// Throws WindowBudgetError when (gamma_end - beta) * m exceeds the budget.
DensityReport window_density_check(std::span<const Functional> psis, const HTable& table,
                                   Index beta, Index gamma_end, int budget);

// --- row pattern completeness --------------------------------------------

struct PatternReport {
    bool pass = false;
    std::map<std::vector<std::uint8_t>, Index> realizing;  // pattern -> row
    std::vector<std::vector<std::uint8_t>> missing;
};

/// Every bit pattern on the window columns must appear as some generator
/// row's restriction.
PatternReport property_p_window_check(const GeneratorMatrix& m, std::span<const Index> window);

}  // namespace gf2gen
