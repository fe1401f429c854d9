#include "gf2gen/psi_builder.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "gf2gen/echelon.hpp"
#include "gf2gen/errors.hpp"

namespace gf2gen {

namespace {

// E_s = union(targets) + [0, min(N_s(k+1), probe_bound)) + union(chosen).
FinVec compute_e_set(const StageState& st) {
    std::set<Index> elems;
    for (const FinVec& t : st.targets) elems.insert(t.begin(), t.end());
    Index seg = std::min<Index>(st.probe_bound,
                                static_cast<Index>(st.marks.back()) * (st.k + 1));
    for (Index e = 0; e < seg; ++e) elems.insert(e);
    for (const FinVec& v : st.chosen_entries) elems.insert(v.begin(), v.end());
    return FinVec(std::vector<Index>(elems.begin(), elems.end()));
}

Functional must_solve(std::span<const Constraint> constraints, Index bound,
                      const char* what) {
    SolveResult r = solve_functional(constraints, bound);
    if (auto* inf = std::get_if<InfeasibleWitness>(&r)) {
        (void)inf;
        throw std::logic_error(std::string(what) + ": constraint system infeasible");
    }
    return std::get<Functional>(std::move(r));
}

}  // namespace

int probe_block_count(int k, Index probe_bound) {
    if (probe_bound <= static_cast<Index>(k)) return 0;
    return static_cast<int>((probe_bound - k - 1) / (k + 1)) + 1;
}

std::vector<int> matching_blocks(const Functional& psi, std::span<const FinVec> targets, int k,
                                 Index probe_bound) {
    std::vector<int> out;
    for (int n = 0; n < probe_block_count(k, probe_bound); ++n) {
        bool all = true;
        for (int i = 0; i <= k && all; ++i) {
            all = psi.eval(targets[i]) ==
                  psi.bit(static_cast<Index>(n) * (k + 1) + static_cast<Index>(i));
        }
        if (all) out.push_back(n);
    }
    return out;
}

int find_claim_n(const FinVec& e_set, const HTable& table, std::span<const int> search) {
    EchelonState base;
    std::size_t tag = 0;
    for (Index b : e_set) base.try_insert(FinVec{b}, tag++);
    for (int n : search) {
        if (!table.has_column(n)) continue;
        EchelonState probe = base;
        bool ok = true;
        std::size_t t2 = tag;
        for (int i = 0; i < table.m() && ok; ++i) {
            ok = !probe.try_insert(table.entry(i, n), t2++);
        }
        if (ok) return n;
    }
    throw ClaimSearchExhaustedError(
        "find_claim_n: no candidate column stays independent of the current set (" +
        std::to_string(search.size()) + " candidates tried)");
}

std::map<int, int> pick_pigeonhole(const FinVec& e_set, std::span<const FinVec> chosen, int k,
                                   int n_lo, int n_hi) {
    EchelonState state;
    std::size_t tag = 0;
    for (Index b : e_set) state.try_insert(FinVec{b}, tag++);
    for (const FinVec& v : chosen) {
        if (state.try_insert(v, tag++)) {
            throw std::logic_error("pick_pigeonhole: base family is dependent");
        }
    }
    std::map<int, int> picks;
    for (int n = n_lo; n < n_hi; ++n) {
        bool placed = false;
        for (int i = 0; i <= k && !placed; ++i) {
            FinVec cell{static_cast<Index>(n) * (k + 1) + static_cast<Index>(i)};
            if (!state.try_insert(cell, tag)) {
                ++tag;
                picks[n] = i;
                placed = true;
            }
        }
        if (!placed) {
            // Impossible when the preconditions hold: the chosen vectors can
            // block at most m <= k of the k+1 fresh cells.
            throw std::logic_error("pick_pigeonhole: no free cell in block " + std::to_string(n));
        }
    }
    return picks;
}

StageState stage_advance(const StageState& state, const ScheduleItem& item) {
    const HTable& table = *item.table;
    const int k = state.k;
    if (static_cast<int>(item.sigma.size()) != table.m()) {
        throw ValidationError("stage_advance: sigma length differs from table arity");
    }
    if (table.bound() > state.ground) {
        throw ValidationError("stage_advance: table supports exceed the ground");
    }

    // Candidate columns: the item's restriction, past the last chosen n,
    // truncated by the claim budget.
    int last_n = state.chosen_n.empty() ? -1 : state.chosen_n.back();
    std::vector<int> search;
    if (item.candidates.empty()) {
        for (int n : table.columns())
            if (n > last_n) search.push_back(n);
    } else {
        for (int n : item.candidates)
            if (n > last_n) search.push_back(n);
    }
    if (state.claim_budget > 0 && static_cast<int>(search.size()) > state.claim_budget) {
        search.resize(state.claim_budget);
    }
    int n_l = find_claim_n(state.e_set, table, search);

    std::vector<FinVec> now;
    now.reserve(table.m());
    for (int i = 0; i < table.m(); ++i) now.push_back(table.entry(i, n_l));

    // Smallest strictly larger mark whose block range covers the probe-region
    // part of the new supports.
    long small_max = -1;
    for (const FinVec& v : now) {
        for (Index e : v) {
            if (e < state.probe_bound) small_max = std::max(small_max, static_cast<long>(e));
        }
    }
    int mark_prev = state.marks.back();
    int mark_next = std::max(mark_prev + 1, static_cast<int>(small_max / (k + 1)) + 1);

    // One committed cell per fresh block inside the probe region. Earlier
    // entries already lie inside the span of the E-set singletons, so only
    // this step's entries join the pigeonhole family.
    std::map<int, int> picks;
    int block_hi = std::min(mark_next, probe_block_count(k, state.probe_bound));
    if (mark_prev < block_hi) {
        picks = pick_pigeonhole(state.e_set, now, k, mark_prev, block_hi);
    }

    // New constraints of this step: realized sigma and the block cells.
    std::vector<Constraint> fresh;
    for (int i = 0; i < table.m(); ++i) fresh.emplace_back(now[i], item.sigma[i]);
    for (const auto& [n, i] : picks) {
        FinVec cell{static_cast<Index>(n) * (k + 1) + static_cast<Index>(i)};
        fresh.emplace_back(std::move(cell),
                           static_cast<std::uint8_t>(1 ^ state.phi.eval(state.targets[i])));
    }

    // Solve under extension pins for everything already laid down.
    std::vector<Constraint> system;
    system.reserve(state.e_set.size() + fresh.size());
    for (Index b : state.e_set) system.emplace_back(FinVec{b}, state.phi.bit(b));
    system.insert(system.end(), fresh.begin(), fresh.end());

    StageState next = state;
    next.phi = must_solve(system, state.ground, "stage_advance");
    next.marks.push_back(mark_next);
    next.chosen_n.push_back(n_l);
    next.chosen_entries.insert(next.chosen_entries.end(), now.begin(), now.end());
    next.e_set = compute_e_set(next);

    StepRecord rec;
    rec.l = static_cast<int>(state.chosen_n.size());
    rec.label = item.label;
    rec.sigma = item.sigma;
    rec.n = n_l;
    rec.mark_next = mark_next;
    rec.picks = picks;
    rec.constraints = std::move(fresh);
    next.steps.push_back(std::move(rec));
    return next;
}

BuildResult build_psi(int k, std::vector<FinVec> targets, std::span<const ScheduleItem> schedule,
                      Index bound, Index probe_bound, int claim_budget) {
    if (k < 1) throw ValidationError("build_psi: k must be positive");
    if (probe_bound == kWholeGround) probe_bound = bound;
    if (probe_bound > bound) throw ValidationError("build_psi: probe bound exceeds the ground");
    if (targets.size() != static_cast<std::size_t>(k) + 1) {
        throw ValidationError("build_psi: expected k+1 targets");
    }
    for (const FinVec& t : targets) {
        if (!t.empty() && t.max() >= bound) {
            throw ValidationError("build_psi: target support past the ground");
        }
    }
    for (const ScheduleItem& item : schedule) {
        if (item.table == nullptr) throw ValidationError("build_psi: schedule item without table");
        if (item.table->bound() > bound) {
            throw ValidationError("build_psi: table support past the ground");
        }
    }

    long small_max = -1;
    for (const FinVec& t : targets) {
        for (Index e : t) {
            if (e < probe_bound) small_max = std::max(small_max, static_cast<long>(e));
        }
    }
    int n0 = std::max(1, static_cast<int>(small_max / (k + 1)) + 1);

    StageState st;
    st.k = k;
    st.ground = bound;
    st.probe_bound = probe_bound;
    st.claim_budget = claim_budget;
    st.targets = std::move(targets);
    st.marks = {n0};
    std::vector<Constraint> init;
    if (!st.targets[0].empty()) init.emplace_back(st.targets[0], 1);
    st.phi = must_solve(init, bound, "build_psi seed");
    st.e_set = compute_e_set(st);

    std::size_t pos = 0;
    for (const ScheduleItem& item : schedule) {
        try {
            st = stage_advance(st, item);
        } catch (const ClaimSearchExhaustedError& e) {
            throw ClaimSearchExhaustedError("schedule item " + std::to_string(pos) + ": " +
                                            e.what());
        }
        ++pos;
    }

    // Close every probe block past the last mark: pin cell 0 against F^0 so
    // the disagreement property extends to the whole probe region.
    std::vector<TailRecord> tail;
    int blocks = probe_block_count(k, probe_bound);
    if (st.marks.back() < blocks) {
        std::vector<Constraint> system;
        for (Index b : st.e_set) system.emplace_back(FinVec{b}, st.phi.bit(b));
        std::uint8_t f0 = st.phi.eval(st.targets[0]);
        for (int n = st.marks.back(); n < blocks; ++n) {
            FinVec cell{static_cast<Index>(n) * (k + 1)};
            std::uint8_t bit = 1 ^ f0;
            system.emplace_back(std::move(cell), bit);
            tail.push_back(TailRecord{n, 0, bit});
        }
        st.phi = must_solve(system, bound, "build_psi tail");
    }

    // Internal invariant: every block at or past N_0 disagrees somewhere.
    for (int n : matching_blocks(st.phi, st.targets, k, probe_bound)) {
        if (n >= n0) {
            throw std::logic_error("build_psi: agreement block " + std::to_string(n) +
                                   " at or past N_0");
        }
    }

    BuildTrace trace;
    trace.k = k;
    trace.probe_bound = probe_bound;
    trace.n0 = n0;
    trace.steps = std::move(st.steps);
    trace.tail = std::move(tail);
    return BuildResult{std::move(st.phi), std::move(trace)};
}

}  // namespace gf2gen
