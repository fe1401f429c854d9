#include "gf2gen/functional.hpp"

#include <algorithm>
#include <map>

#include "gf2gen/echelon.hpp"
#include "gf2gen/errors.hpp"

namespace gf2gen {

std::uint8_t Functional::eval(const FinVec& v) const {
    std::uint8_t acc = 0;
    for (Index i : v) acc ^= bits_.at(i);
    return acc;
}

std::string bits_to_hex(std::span<const std::uint8_t> bits) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t j = 0; j * 4 < bits.size(); ++j) {
        int nibble = 0;
        for (std::size_t b = 0; b < 4 && j * 4 + b < bits.size(); ++b) {
            nibble |= bits[j * 4 + b] << b;
        }
        out += digits[nibble];
    }
    return out;
}

std::vector<std::uint8_t> hex_to_bits(std::string_view hex, std::size_t nbits) {
    if (hex.size() != (nbits + 3) / 4) {
        throw ValidationError("hex_to_bits: length does not match the bit count");
    }
    std::vector<std::uint8_t> bits(nbits, 0);
    for (std::size_t j = 0; j < hex.size(); ++j) {
        char c = hex[j];
        int nibble;
        if (c >= '0' && c <= '9') nibble = c - '0';
        else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
        else throw ValidationError("hex_to_bits: bad hex digit");
        for (std::size_t b = 0; b < 4; ++b) {
            if (j * 4 + b < nbits) {
                bits[j * 4 + b] = static_cast<std::uint8_t>((nibble >> b) & 1);
            } else if ((nibble >> b) & 1) {
                throw ValidationError("hex_to_bits: stray bits past the count");
            }
        }
    }
    return bits;
}

std::string Functional::to_hex() const { return bits_to_hex(bits_); }

Functional Functional::from_hex(std::string_view hex, Index bound) {
    return Functional(hex_to_bits(hex, bound));
}

SolveResult solve_functional(std::span<const Constraint> constraints, Index bound) {
    struct Row {
        FinVec vec;
        std::uint8_t bit;
        std::vector<std::size_t> combo;  // original constraint positions
    };
    std::vector<Row> rows;
    std::map<Index, std::size_t> pivots;

    for (std::size_t c = 0; c < constraints.size(); ++c) {
        FinVec rem = constraints[c].first;
        if (!rem.empty() && rem.max() >= bound) {
            throw ValidationError("solve_functional: constraint support past bound");
        }
        std::uint8_t b = constraints[c].second & 1;
        std::vector<std::size_t> combo{c};
        bool changed = true;
        while (changed) {
            changed = false;
            for (Index e : rem) {
                auto it = pivots.find(e);
                if (it == pivots.end()) continue;
                const Row& row = rows[it->second];
                rem = sym_diff(rem, row.vec);
                b ^= row.bit;
                combo = xor_positions(combo, row.combo);
                changed = true;
                break;
            }
        }
        if (rem.empty()) {
            if (b) return InfeasibleWitness{std::move(combo)};
            continue;  // redundant but consistent
        }
        Index pivot = rem.min();
        for (Row& row : rows) {
            if (row.vec.contains(pivot)) {
                row.vec = sym_diff(row.vec, rem);
                row.bit ^= b;
                row.combo = xor_positions(row.combo, combo);
            }
        }
        pivots[pivot] = rows.size();
        rows.push_back(Row{std::move(rem), b, std::move(combo)});
    }

    // Rows are fully reduced, so every non-pivot coordinate is free; with
    // free bits at zero each pivot simply carries its row's target bit.
    Functional out(bound);
    for (const auto& [pivot, rowpos] : pivots) out.set_bit(pivot, rows[rowpos].bit);
    return out;
}

std::vector<std::uint8_t> eval_interval(std::span<const Functional> stages, const FinVec& v) {
    std::vector<std::uint8_t> out;
    out.reserve(stages.size());
    for (const Functional& f : stages) out.push_back(f.eval(v));
    return out;
}

}  // namespace gf2gen
