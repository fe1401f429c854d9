#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gf2gen {

using Index = std::uint32_t;

/// Finite subset of the ground index set, kept strictly sorted.
///
/// A FinVec is simultaneously a GF(2) vector (the set is the support) and
/// the support of a group element: the sum of two vectors is the symmetric
/// difference of their supports. The empty set is the zero vector.
class FinVec {
public:
    FinVec() = default;
    /// Elements are sorted on construction; duplicates are rejected
    /// (a set literal with a repeated element is almost always a bug).
    explicit FinVec(std::vector<Index> elems);
    FinVec(std::initializer_list<Index> elems);

    bool empty() const { return elems_.empty(); }
    std::size_t size() const { return elems_.size(); }
    Index min() const { return elems_.front(); }   // pre: !empty()
    Index max() const { return elems_.back(); }    // pre: !empty()
    bool contains(Index i) const;
    std::span<const Index> elems() const { return elems_; }

    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

    bool operator==(const FinVec&) const = default;
    auto operator<=>(const FinVec&) const = default;

private:
    std::vector<Index> elems_;
    friend FinVec sym_diff(const FinVec&, const FinVec&);
};

/// GF(2) sum: the symmetric difference of the two supports.
FinVec sym_diff(const FinVec& a, const FinVec& b);

/// Fold sym_diff over a family; empty family gives the zero vector.
FinVec sym_diff_all(std::span<const FinVec> family);

/// "1,3,5" (ascending, comma separated). The zero vector prints as "".
std::string format_finvec(const FinVec& v);

/// Accepts "1,3,5", "{1,3,5}", "" and "{}". Throws std::invalid_argument
/// on malformed input, unsorted order or duplicates.
FinVec parse_finvec(std::string_view text);

}  // namespace gf2gen
