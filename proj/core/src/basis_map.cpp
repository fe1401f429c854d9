#include "gf2gen/basis_map.hpp"

#include <map>
#include <memory>

#include "gf2gen/errors.hpp"

namespace gf2gen {

BasisMap BasisMap::create(std::span<const FinVec> prefix, Index ground, Index min_codim) {
    if (prefix.size() + min_codim > ground) {
        throw CodimensionError("BasisMap: only " + std::to_string(ground - prefix.size()) +
                               " dimensions left over the family, need " +
                               std::to_string(min_codim));
    }
    for (const FinVec& v : prefix) {
        if (!v.empty() && v.max() >= ground) {
            throw ValidationError("BasisMap: family support past the ground");
        }
    }

    BasisMap m;
    m.ground_ = ground;
    m.prefix_size_ = prefix.size();
    m.basis_.assign(prefix.begin(), prefix.end());
    std::vector<FinVec> completion = complete_basis(prefix, ground);  // checks independence
    m.basis_.insert(m.basis_.end(), completion.begin(), completion.end());

    EchelonState full;
    for (std::size_t j = 0; j < m.basis_.size(); ++j) full.try_insert(m.basis_[j], j);
    m.single_coords_.reserve(ground);
    for (Index b = 0; b < ground; ++b) {
        EchelonState::Reduction r = full.reduce(FinVec{b});
        if (!r.remainder.empty()) {
            throw std::logic_error("BasisMap: completed family does not span");
        }
        std::vector<Index> coords(r.combo.begin(), r.combo.end());
        m.single_coords_.push_back(FinVec(std::move(coords)));
    }
    return m;
}

FinVec BasisMap::forward(const FinVec& v) const {
    FinVec acc;
    for (Index e : v) acc = sym_diff(acc, single_coords_.at(e));
    return acc;
}

HTable transport_table(const HTable& table, const BasisMap& map) {
    std::vector<int> columns(table.columns().begin(), table.columns().end());
    std::vector<std::vector<FinVec>> entries;
    entries.reserve(columns.size());
    for (int n : columns) {
        std::vector<FinVec> group;
        group.reserve(table.m());
        for (int i = 0; i < table.m(); ++i) group.push_back(map.forward(table.entry(i, n)));
        entries.push_back(std::move(group));
    }
    return HTable::create(table.m(), std::move(columns), std::move(entries), map.ground());
}

ReducedBuildResult build_psi_reduced(int k, std::vector<FinVec> targets,
                                     std::span<const FinVec> h_family,
                                     std::span<const ScheduleItem> schedule, Index ground,
                                     Index min_codim, int claim_budget) {
    BasisMap map = BasisMap::create(h_family, ground, min_codim);

    std::vector<FinVec> inner_targets;
    inner_targets.reserve(targets.size());
    for (const FinVec& t : targets) inner_targets.push_back(map.forward(t));

    std::map<const HTable*, std::size_t> seen;
    std::vector<std::unique_ptr<HTable>> transported;
    std::vector<ScheduleItem> items(schedule.begin(), schedule.end());
    for (ScheduleItem& item : items) {
        auto [it, fresh] = seen.try_emplace(item.table, transported.size());
        if (fresh) {
            transported.push_back(std::make_unique<HTable>(transport_table(*item.table, map)));
        }
        item.table = transported[it->second].get();
    }

    BuildResult inner = build_psi(k, std::move(inner_targets), items, ground,
                                  static_cast<Index>(h_family.size()), claim_budget);

    Functional psi(ground);
    for (Index b = 0; b < ground; ++b) {
        psi.set_bit(b, inner.psi.eval(map.forward(FinVec{b})));
    }

    ReducedBuildResult out;
    out.psi = std::move(psi);
    out.psi_inner = std::move(inner.psi);
    out.trace = std::move(inner.trace);
    out.basis = map.ordered_basis();
    return out;
}

}  // namespace gf2gen
