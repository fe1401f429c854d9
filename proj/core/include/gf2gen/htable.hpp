#pragma once

#include <span>
#include <vector>

#include "gf2gen/finvec.hpp"

namespace gf2gen {

/// A scheduled table f : m x C -> finite index sets whose entries form one
/// independent family. Columns are labelled by the ascending integers in
/// `columns`; entries(c, i) is the vector for (i, columns[c]).
class HTable {
public:
    HTable() = default;  // empty placeholder; build via create()

    /// Validates sizes, the support bound and entry-family independence;
    /// throws DependentFamilyError / ValidationError.
    static HTable create(int m, std::vector<int> columns,
                         std::vector<std::vector<FinVec>> entries, Index bound);

    int m() const { return m_; }
    Index bound() const { return bound_; }
    std::span<const int> columns() const { return columns_; }

    bool has_column(int n) const;
    /// Pre: has_column(n), 0 <= i < m.
    const FinVec& entry(int i, int n) const;
    const std::vector<FinVec>& column_entries(int n) const;

    /// All m * |C| entries flattened, column-major in column order.
    std::vector<FinVec> flat_entries() const;

private:
    int m_ = 0;
    Index bound_ = 0;
    std::vector<int> columns_;
    std::vector<std::vector<FinVec>> entries_;  // entries_[c][i]
    int column_pos(int n) const;
};

/// One step of a build schedule: realize `sigma` on some column of
/// `table`. When `candidates` is nonempty the column is drawn from that
/// subset of the table's columns (used to steer realizations into a
/// history class); otherwise any column qualifies. `label` is opaque and
/// echoed into the trace.
struct ScheduleItem {
    const HTable* table = nullptr;
    std::vector<std::uint8_t> sigma;   // length table->m()
    std::vector<int> candidates;       // ascending subset of columns; empty = all
    int label = 0;
};

}  // namespace gf2gen
