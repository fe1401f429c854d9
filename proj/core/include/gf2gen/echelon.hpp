#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gf2gen/finvec.hpp"

namespace gf2gen {

/// Incremental GF(2) elimination over index-set rows.
///
/// Rows are kept fully reduced: each row's minimum element is its pivot,
/// pivots are pairwise distinct, and no row contains another row's pivot.
/// Every row carries the set of inserted positions whose sum it is, so a
/// vector that reduces to zero yields a concrete dependency witness.
class EchelonState {
public:
    std::size_t rank() const { return rows_.size(); }
    bool has_pivot(Index i) const { return pivots_.count(i) != 0; }

    struct Reduction {
        FinVec remainder;                  // zero iff input is in the span
        std::vector<std::size_t> combo;    // positions combined during reduction
    };
    Reduction reduce(const FinVec& v) const;

    /// Insert v tagged with the caller's position. Returns std::nullopt on
    /// success; otherwise the dependency witness (positions, including tag,
    /// whose sum is zero). Zero vectors are rejected with witness {tag}.
    std::optional<std::vector<std::size_t>> try_insert(const FinVec& v, std::size_t tag);

    const std::map<Index, std::size_t>& pivots() const { return pivots_; }

private:
    struct Row {
        FinVec vec;
        std::vector<std::size_t> combo;
    };
    std::vector<Row> rows_;
    std::map<Index, std::size_t> pivots_;  // pivot element -> row position
};

/// XOR of two sorted position sets (combination bookkeeping).
std::vector<std::size_t> xor_positions(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b);

struct IndependenceVerdict {
    bool independent = false;
    /// Nonempty iff dependent: positions into the checked family whose
    /// sym_diff is the zero vector (a zero member witnesses alone).
    std::vector<std::size_t> witness;
};

/// GF(2) independence in the group sense: no member is zero and no
/// nonempty sub-multiset sums to zero.
IndependenceVerdict is_independent(std::span<const FinVec> family);

/// GF(2) rank of the family; equals family.size() iff independent.
std::size_t rank(std::span<const FinVec> family);

/// Greedy smallest-index singleton completion: the returned vectors
/// together with `family` form a basis of the space on [0, ground).
/// Throws DependentFamilyError if `family` is not independent.
std::vector<FinVec> complete_basis(std::span<const FinVec> family, Index ground);

}  // namespace gf2gen
