#pragma once

#include <span>
#include <vector>

#include "gf2gen/echelon.hpp"
#include "gf2gen/htable.hpp"
#include "gf2gen/psi_builder.hpp"

namespace gf2gen {

/// An ordered basis of the space on [0, ground) whose prefix is a given
/// independent family, together with the coordinate isomorphism sending
/// the j-th basis vector to the singleton {j}.
class BasisMap {
public:
    /// Basis = prefix ++ greedy singleton completion. Throws
    /// DependentFamilyError, or CodimensionError when
    /// ground - |prefix| < min_codim.
    static BasisMap create(std::span<const FinVec> prefix, Index ground, Index min_codim = 0);

    Index ground() const { return ground_; }
    std::size_t prefix_size() const { return prefix_size_; }
    const std::vector<FinVec>& ordered_basis() const { return basis_; }

    /// Coordinates of v in the ordered basis; linear and bijective,
    /// forward(basis[j]) == {j}.
    FinVec forward(const FinVec& v) const;

private:
    Index ground_ = 0;
    std::size_t prefix_size_ = 0;
    std::vector<FinVec> basis_;
    std::vector<FinVec> single_coords_;  // forward({b}) per ground element b
};

/// Entry-wise image of a table under the map; independence is preserved
/// and re-checked by HTable::create.
HTable transport_table(const HTable& table, const BasisMap& map);

struct ReducedBuildResult {
    Functional psi;        // on [0, ground): the pulled-back functional
    Functional psi_inner;  // the functional built in basis coordinates
    BuildTrace trace;
    std::vector<FinVec> basis;
};

/// Complete `h_family` to a basis, transport targets and schedule through
/// the coordinate map, run build_psi with the family positions as the
/// probe region, and pull the result back. The schedule items' tables are
/// replaced by their transported copies internally.
ReducedBuildResult build_psi_reduced(int k, std::vector<FinVec> targets,
                                     std::span<const FinVec> h_family,
                                     std::span<const ScheduleItem> schedule, Index ground,
                                     Index min_codim = 0, int claim_budget = 4096);

}  // namespace gf2gen
