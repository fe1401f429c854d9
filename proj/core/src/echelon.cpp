#include "gf2gen/echelon.hpp"

#include <algorithm>

#include "gf2gen/errors.hpp"

namespace gf2gen {

std::vector<std::size_t> xor_positions(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b) {
    std::vector<std::size_t> out;
    out.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) out.push_back(*ia++);
        else if (*ib < *ia) out.push_back(*ib++);
        else { ++ia; ++ib; }
    }
    out.insert(out.end(), ia, a.end());
    out.insert(out.end(), ib, b.end());
    return out;
}

EchelonState::Reduction EchelonState::reduce(const FinVec& v) const {
    // Eliminate every pivot element anywhere in the support, so remainders
    // carry no pivot at all and the rows stay fully reduced.
    Reduction r{v, {}};
    bool changed = true;
    while (changed) {
        changed = false;
        for (Index e : r.remainder) {
            auto it = pivots_.find(e);
            if (it == pivots_.end()) continue;
            const Row& row = rows_[it->second];
            r.remainder = sym_diff(r.remainder, row.vec);
            r.combo = xor_positions(r.combo, row.combo);
            changed = true;
            break;
        }
    }
    return r;
}

std::optional<std::vector<std::size_t>> EchelonState::try_insert(const FinVec& v,
                                                                 std::size_t tag) {
    Reduction r = reduce(v);
    if (r.remainder.empty()) {
        return xor_positions(r.combo, {tag});
    }
    Index pivot = r.remainder.min();
    // Keep earlier rows clear of the new pivot.
    for (Row& row : rows_) {
        if (row.vec.contains(pivot)) {
            row.vec = sym_diff(row.vec, r.remainder);
            row.combo = xor_positions(row.combo, xor_positions(r.combo, {tag}));
        }
    }
    pivots_[pivot] = rows_.size();
    rows_.push_back(Row{std::move(r.remainder), xor_positions(r.combo, {tag})});
    return std::nullopt;
}

IndependenceVerdict is_independent(std::span<const FinVec> family) {
    EchelonState state;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (auto witness = state.try_insert(family[i], i)) {
            return IndependenceVerdict{false, std::move(*witness)};
        }
    }
    return IndependenceVerdict{true, {}};
}

std::size_t rank(std::span<const FinVec> family) {
    EchelonState state;
    for (std::size_t i = 0; i < family.size(); ++i) state.try_insert(family[i], i);
    return state.rank();
}

std::vector<FinVec> complete_basis(std::span<const FinVec> family, Index ground) {
    EchelonState state;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!family[i].empty() && family[i].max() >= ground) {
            throw ValidationError("complete_basis: support reaches past the ground");
        }
        if (state.try_insert(family[i], i)) {
            throw DependentFamilyError("complete_basis: family is dependent");
        }
    }
    // The non-pivot singletons complete the family: each adds a fresh pivot,
    // and together they cover the missing ground - rank dimensions.
    std::vector<FinVec> out;
    for (Index idx = 0; idx < ground; ++idx) {
        if (!state.has_pivot(idx)) out.push_back(FinVec{idx});
    }
    return out;
}

}  // namespace gf2gen
