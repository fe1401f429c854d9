#include "gf2gen/htable.hpp"

#include <algorithm>

#include "gf2gen/echelon.hpp"
#include "gf2gen/errors.hpp"

namespace gf2gen {

HTable HTable::create(int m, std::vector<int> columns, std::vector<std::vector<FinVec>> entries,
                      Index bound) {
    if (m < 1) throw ValidationError("HTable: m must be at least 1");
    if (columns.empty()) throw ValidationError("HTable: empty column set");
    if (!std::is_sorted(columns.begin(), columns.end()) ||
        std::adjacent_find(columns.begin(), columns.end()) != columns.end()) {
        throw ValidationError("HTable: columns must be strictly ascending");
    }
    if (columns.front() < 0) throw ValidationError("HTable: negative column label");
    if (entries.size() != columns.size()) {
        throw ValidationError("HTable: one entry group per column required");
    }
    std::vector<FinVec> flat;
    for (const auto& group : entries) {
        if (static_cast<int>(group.size()) != m) {
            throw ValidationError("HTable: entry group size differs from m");
        }
        for (const FinVec& v : group) {
            if (!v.empty() && v.max() >= bound) {
                throw ValidationError("HTable: entry support past the bound");
            }
            flat.push_back(v);
        }
    }
    if (auto verdict = is_independent(flat); !verdict.independent) {
        throw DependentFamilyError("HTable: entry family is dependent");
    }

    HTable t;
    t.m_ = m;
    t.bound_ = bound;
    t.columns_ = std::move(columns);
    t.entries_ = std::move(entries);
    return t;
}

int HTable::column_pos(int n) const {
    auto it = std::lower_bound(columns_.begin(), columns_.end(), n);
    if (it == columns_.end() || *it != n) return -1;
    return static_cast<int>(it - columns_.begin());
}

bool HTable::has_column(int n) const { return column_pos(n) >= 0; }

const FinVec& HTable::entry(int i, int n) const {
    int pos = column_pos(n);
    if (pos < 0) throw ValidationError("HTable: no such column " + std::to_string(n));
    return entries_.at(pos).at(i);
}

const std::vector<FinVec>& HTable::column_entries(int n) const {
    int pos = column_pos(n);
    if (pos < 0) throw ValidationError("HTable: no such column " + std::to_string(n));
    return entries_.at(pos);
}

std::vector<FinVec> HTable::flat_entries() const {
    std::vector<FinVec> flat;
    flat.reserve(columns_.size() * m_);
    for (const auto& group : entries_) flat.insert(flat.end(), group.begin(), group.end());
    return flat;
}

}  // namespace gf2gen
