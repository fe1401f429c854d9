#include "gf2gen/verifiers.hpp"

#include <algorithm>

#include "gf2gen/errors.hpp"

namespace gf2gen {

bool OpenBox::admits(std::span<const std::uint8_t> bits) const {
    for (const auto& [coord, bit] : pins) {
        if (coord >= bits.size() || bits[coord] != bit) return false;
    }
    return true;
}

GroupElement realize(const GeneratorMatrix& m, const FinVec& combo) {
    GroupElement e;
    e.combo = combo;
    e.bits.assign(m.cols, 0);
    for (Index xi : combo) {
        for (Index alpha = 0; alpha < m.cols; ++alpha) e.bits[alpha] ^= m.x.at(xi).at(alpha);
    }
    return e;
}

FinVec bits_support(std::span<const std::uint8_t> bits) {
    std::vector<Index> elems;
    for (Index i = 0; i < bits.size(); ++i) {
        if (bits[i]) elems.push_back(i);
    }
    return FinVec(std::move(elems));
}

std::vector<TransferVerdict> independence_transfer_check(
    const GeneratorMatrix& m, std::span<const std::vector<FinVec>> families) {
    std::vector<TransferVerdict> out;
    out.reserve(families.size());
    for (const auto& family : families) {
        TransferVerdict v;
        IndependenceVerdict combos = is_independent(family);
        std::vector<FinVec> realized;
        realized.reserve(family.size());
        for (const FinVec& combo : family) {
            realized.push_back(bits_support(realize(m, combo).bits));
        }
        IndependenceVerdict elements = is_independent(realized);
        v.combos_independent = combos.independent;
        v.elements_independent = elements.independent;
        v.agree = combos.independent == elements.independent;
        v.witness = combos.independent ? elements.witness : combos.witness;
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::vector<OpenBox>> build_open_family(int k, std::span<const Index> coords,
                                                    int count) {
    if (coords.size() < static_cast<std::size_t>(count) * (k + 1)) {
        throw ValidationError("build_open_family: not enough coordinates");
    }
    for (std::size_t j = 1; j < coords.size(); ++j) {
        if (coords[j - 1] >= coords[j]) {
            throw ValidationError("build_open_family: coordinates must be ascending");
        }
    }
    // Box j pins coords[j] to 1 and everything earlier to 0; any selection
    // across boxes then keeps bit 1 at its smallest box coordinate.
    std::vector<std::vector<OpenBox>> tuples;
    tuples.reserve(count);
    for (int n = 0; n < count; ++n) {
        std::vector<OpenBox> tuple;
        tuple.reserve(k + 1);
        for (int i = 0; i <= k; ++i) {
            std::size_t j = static_cast<std::size_t>(n) * (k + 1) + i;
            OpenBox box;
            for (std::size_t p = 0; p < j; ++p) box.pins[coords[p]] = 0;
            box.pins[coords[j]] = 1;
            tuple.push_back(std::move(box));
        }
        tuples.push_back(std::move(tuple));
    }
    return tuples;
}

SelectionVerdict selection_independence_check(const GeneratorMatrix& m,
                                              std::span<const std::vector<OpenBox>> family,
                                              std::span<const std::vector<GroupElement>> selections) {
    SelectionVerdict v;
    std::vector<FinVec> flat_bits;
    std::vector<FinVec> flat_combos;
    std::size_t flat = 0;
    for (std::size_t n = 0; n < selections.size(); ++n) {
        for (std::size_t i = 0; i < selections[n].size(); ++i, ++flat) {
            const GroupElement& e = selections[n][i];
            GroupElement recomputed = realize(m, e.combo);
            if (recomputed.bits != e.bits || !family[n][i].admits(e.bits)) {
                v.box_violation = true;
                v.violating_selection = flat;
                return v;
            }
            flat_bits.push_back(bits_support(e.bits));
            flat_combos.push_back(e.combo);
        }
    }
    IndependenceVerdict bits_side = is_independent(flat_bits);
    IndependenceVerdict combo_side = is_independent(flat_combos);
    // The realized side is the authoritative one; the combo side must not
    // disagree in the dependent direction (a zero combo sum forces a zero
    // element sum).
    v.independent = bits_side.independent;
    v.witness = bits_side.independent ? combo_side.witness : bits_side.witness;
    if (!combo_side.independent && bits_side.independent) {
        v.independent = false;
        v.witness = combo_side.witness;
    }
    return v;
}

NonAccumulationReport non_accumulation_witness(std::span<const Functional> psis,
                                               const AssignmentMap& assignments,
                                               std::span<const std::optional<StageOutcome>> outcomes,
                                               const FTask& task, int k) {
    NonAccumulationReport report;
    for (const auto& [stage, assignment] : assignments) {
        if (!assignment.f_task) continue;
        if (assignment.f_task->vectors != task.vectors ||
            assignment.f_task->targets != task.targets) {
            continue;
        }
        report.matched = true;
        report.stage = stage;
        if (stage >= outcomes.size() || !outcomes[stage]) {
            throw ValidationError("non_accumulation_witness: stage outcome missing");
        }
        report.bound_n0 = outcomes[stage]->trace.n0;
        const Functional& psi = psis[stage];
        int blocks = probe_block_count(k, static_cast<Index>(task.vectors.size()));
        report.verified = true;
        for (int n = report.bound_n0; n < blocks; ++n) {
            bool all_agree = true;
            for (int i = 0; i <= k && all_agree; ++i) {
                const FinVec& vec = task.vectors[static_cast<std::size_t>(n) * (k + 1) + i];
                all_agree = psi.eval(vec) == psi.eval(task.targets[i]);
            }
            if (all_agree) {
                report.verified = false;
                report.offending_blocks.push_back(n);
            }
        }
        return report;
    }
    return report;  // matched == false: the target was never scheduled
}

DensityReport window_density_check(std::span<const Functional> psis, const HTable& table,
                                   Index beta, Index gamma_end, int budget) {
    if (gamma_end < beta) throw ValidationError("window_density_check: window ends before beta");
    if (gamma_end == beta) {
        // Width zero: the single empty target is realized by any column.
        DensityReport vacuous;
        vacuous.pass = true;
        vacuous.realizing.emplace(std::vector<std::uint8_t>{}, table.columns().front());
        return vacuous;
    }
    if (gamma_end > psis.size()) {
        throw ValidationError("window_density_check: window past the built stages");
    }
    const int width = static_cast<int>(gamma_end - beta);
    if (width * table.m() > budget) {
        throw WindowBudgetError("window_density_check: width*m " +
                                std::to_string(width * table.m()) + " over budget " +
                                std::to_string(budget));
    }

    // Trajectory per column: component-major bits (i, then stage).
    std::map<std::vector<std::uint8_t>, int> seen;
    for (int n : table.columns()) {
        std::vector<std::uint8_t> key;
        key.reserve(static_cast<std::size_t>(width) * table.m());
        for (int i = 0; i < table.m(); ++i) {
            for (Index g = beta; g < gamma_end; ++g) key.push_back(psis[g].eval(table.entry(i, n)));
        }
        seen.try_emplace(std::move(key), n);
    }

    DensityReport report;
    const std::size_t total_bits = static_cast<std::size_t>(width) * table.m();
    for (std::uint64_t pat = 0; pat < (1ULL << total_bits); ++pat) {
        std::vector<std::uint8_t> key(total_bits);
        for (std::size_t b = 0; b < total_bits; ++b) {
            key[b] = static_cast<std::uint8_t>((pat >> b) & 1);
        }
        auto it = seen.find(key);
        if (it == seen.end()) {
            report.missing.push_back(std::move(key));
        } else {
            report.realizing.emplace(std::move(key), it->second);
        }
    }
    report.pass = report.missing.empty();
    return report;
}

PatternReport property_p_window_check(const GeneratorMatrix& m, std::span<const Index> window) {
    for (Index col : window) {
        if (col >= m.cols) throw ValidationError("property_p_window_check: column out of range");
    }
    std::map<std::vector<std::uint8_t>, Index> seen;
    for (Index xi = 0; xi < m.rows; ++xi) {
        std::vector<std::uint8_t> key;
        key.reserve(window.size());
        for (Index col : window) key.push_back(m.x[xi][col]);
        seen.try_emplace(std::move(key), xi);
    }
    PatternReport report;
    for (std::uint64_t pat = 0; pat < (1ULL << window.size()); ++pat) {
        std::vector<std::uint8_t> key(window.size());
        for (std::size_t b = 0; b < window.size(); ++b) {
            key[b] = static_cast<std::uint8_t>((pat >> b) & 1);
        }
        auto it = seen.find(key);
        if (it == seen.end()) {
            report.missing.push_back(std::move(key));
        } else {
            report.realizing.emplace(std::move(key), it->second);
        }
    }
    report.pass = report.missing.empty();
    return report;
}

}  // namespace gf2gen
