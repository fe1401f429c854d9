#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gf2gen/finvec.hpp"

namespace gf2gen {

/// GF(2)-linear functional on the finite subsets of [0, bound), stored as
/// its values on singletons. eval is the parity of the bits over the
/// support, so eval(a ^ b) == eval(a) ^ eval(b) by construction.
class Functional {
public:
    Functional() = default;
    explicit Functional(Index bound) : bits_(bound, 0) {}
    explicit Functional(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

    Index bound() const { return static_cast<Index>(bits_.size()); }
    std::uint8_t bit(Index i) const { return bits_.at(i); }
    void set_bit(Index i, std::uint8_t b) { bits_.at(i) = b & 1; }

    /// Parity of the stored bits over v's support. Pre: v.max() < bound().
    std::uint8_t eval(const FinVec& v) const;

    std::span<const std::uint8_t> bits() const { return bits_; }

    bool operator==(const Functional&) const = default;

    /// Hex string, one digit per four bits, lowest indices first; bit 4j of
    /// the functional is the least significant bit of digit j.
    std::string to_hex() const;
    static Functional from_hex(std::string_view hex, Index bound);

private:
    std::vector<std::uint8_t> bits_;
};

struct InfeasibleWitness {
    /// Positions into the constraint list whose vectors sum to zero while
    /// their target bits sum to one.
    std::vector<std::size_t> constraint_positions;
};

using Constraint = std::pair<FinVec, std::uint8_t>;
using SolveResult = std::variant<Functional, InfeasibleWitness>;

/// Solve eval(F) == b for every (F, b). Unconstrained degrees of freedom
/// are set to zero, so the result is deterministic.
SolveResult solve_functional(std::span<const Constraint> constraints, Index bound);

/// Component j is stages[j].eval(v).
std::vector<std::uint8_t> eval_interval(std::span<const Functional> stages, const FinVec& v);

/// Hex codec shared by functionals, matrix rows and target rows: one digit
/// per four bits, bit 4j is the least significant bit of digit j.
std::string bits_to_hex(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> hex_to_bits(std::string_view hex, std::size_t nbits);

}  // namespace gf2gen
