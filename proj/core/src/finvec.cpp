#include "gf2gen/finvec.hpp"

#include <algorithm>
#include <stdexcept>

namespace gf2gen {

FinVec::FinVec(std::vector<Index> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end()) {
        throw std::invalid_argument("FinVec: duplicate element");
    }
}

FinVec::FinVec(std::initializer_list<Index> elems) : FinVec(std::vector<Index>(elems)) {}

bool FinVec::contains(Index i) const {
    return std::binary_search(elems_.begin(), elems_.end(), i);
}

FinVec sym_diff(const FinVec& a, const FinVec& b) {
    FinVec out;
    out.elems_.reserve(a.size() + b.size());
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            out.elems_.push_back(*ia++);
        } else if (*ib < *ia) {
            out.elems_.push_back(*ib++);
        } else {
            ++ia;  // common element cancels
            ++ib;
        }
    }
    out.elems_.insert(out.elems_.end(), ia, a.end());
    out.elems_.insert(out.elems_.end(), ib, b.end());
    return out;
}

FinVec sym_diff_all(std::span<const FinVec> family) {
    FinVec acc;
    for (const FinVec& v : family) acc = sym_diff(acc, v);
    return acc;
}

std::string format_finvec(const FinVec& v) {
    std::string out;
    for (Index i : v) {
        if (!out.empty()) out += ',';
        out += std::to_string(i);
    }
    return out;
}

FinVec parse_finvec(std::string_view text) {
    if (!text.empty() && text.front() == '{') {
        if (text.back() != '}') throw std::invalid_argument("FinVec: unbalanced braces");
        text.remove_prefix(1);
        text.remove_suffix(1);
    }
    std::vector<Index> elems;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view tok = text.substr(pos, end - pos);
        if (tok.empty()) throw std::invalid_argument("FinVec: empty element");
        Index value = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') throw std::invalid_argument("FinVec: not a number");
            value = value * 10 + static_cast<Index>(c - '0');
        }
        if (!elems.empty() && elems.back() >= value) {
            throw std::invalid_argument("FinVec: elements must be strictly ascending");
        }
        elems.push_back(value);
        pos = end + 1;
    }
    return FinVec(std::move(elems));
}

}  // namespace gf2gen
