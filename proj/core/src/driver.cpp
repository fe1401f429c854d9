#include "gf2gen/driver.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "gf2gen/echelon.hpp"
#include "gf2gen/errors.hpp"

namespace gf2gen {

void DriverConfig::validate() const {
    if (k < 1) throw ValidationError("config.k: must be positive");
    if (base < 2) throw ValidationError("config.base: must be at least 2");
    if (base > stages) throw ValidationError("config.base: exceeds config.stages");
    if (stages > ground_size) throw ValidationError("config.stages: exceeds config.ground_size");
    if (stages * static_cast<Index>(k + 1) > ground_size) {
        throw ValidationError("config.stages: stages*(k+1) exceeds config.ground_size");
    }
    if (repetition < 1) throw ValidationError("config.repetition: must be at least 1");
    if (claim_budget < 1) throw ValidationError("config.claim_budget: must be at least 1");
    if (pattern_width < 1) throw ValidationError("config.pattern_width: must be at least 1");
    if (density_budget < 1) throw ValidationError("config.density_budget: must be at least 1");
    if (combo_search_limit < 1) {
        throw ValidationError("config.combo_search_limit: must be at least 1");
    }
    if (family_samples < 0) throw ValidationError("config.family_samples: must be non-negative");
}

TMatrix::TMatrix(Index base, Index ground, std::vector<std::vector<std::uint8_t>> rows)
    : base_(base), ground_(ground), rows_(std::move(rows)) {
    if (rows_.size() != ground_ - base_) {
        throw ValidationError("t_rows: expected one row per index in [base, ground)");
    }
    for (Index xi = base_; xi < ground_; ++xi) {
        if (rows_[xi - base_].size() != xi) {
            throw ValidationError("t_rows[" + std::to_string(xi) + "]: row must have " +
                                  std::to_string(xi) + " bits");
        }
    }
}

std::uint8_t TMatrix::bit(Index xi, Index alpha) const { return rows_.at(xi - base_).at(alpha); }

const std::vector<std::uint8_t>& TMatrix::row(Index xi) const { return rows_.at(xi - base_); }

namespace {

std::vector<std::uint8_t> sigma_of(int j, int m) {
    std::vector<std::uint8_t> sigma(m);
    for (int i = 0; i < m; ++i) sigma[i] = static_cast<std::uint8_t>((j >> i) & 1);
    return sigma;
}

// All size-`size` subsets of [0, n), used for small window enumeration.
void for_each_subset(int n, int size, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> pick(size);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == size) {
            fn(pick);
            return;
        }
        for (int v = start; v <= n - (size - depth); ++v) {
            pick[depth] = v;
            rec(v + 1, depth + 1);
        }
    };
    if (size <= n) rec(0, 0);
}

// Do the chosen code columns realize every bit pattern on every window of
// the given width that includes the candidate column?
bool code_compatible(const std::vector<std::vector<std::uint8_t>>& accepted,
                     const std::vector<std::uint8_t>& cand, int width) {
    int rows = static_cast<int>(cand.size());
    bool ok = true;
    for_each_subset(static_cast<int>(accepted.size()), width - 1,
                    [&](const std::vector<int>& subset) {
                        if (!ok) return;
                        std::set<std::uint64_t> seen;
                        for (int r = 0; r < rows; ++r) {
                            std::uint64_t pat = cand[r];
                            for (std::size_t s = 0; s < subset.size(); ++s) {
                                pat |= static_cast<std::uint64_t>(accepted[subset[s]][r])
                                       << (s + 1);
                            }
                            seen.insert(pat);
                        }
                        if (seen.size() != (1u << width)) ok = false;
                    });
    return ok;
}

}  // namespace

TMatrix make_pattern_complete_tmatrix(const DriverConfig& cfg) {
    cfg.validate();
    const Index base = cfg.base, ground = cfg.ground_size, stages = cfg.stages;
    const int w = cfg.pattern_width;
    const int code_rows = static_cast<int>(ground - stages);
    if ((1u << w) > static_cast<unsigned>(code_rows)) {
        throw ValidationError("pattern_width: ground-stages rows cannot realize 2^w patterns");
    }
    std::mt19937_64 rng(cfg.seed ^ 0x74726f77ULL);

    // One code word per column of [0, stages); rows at and above `stages`
    // transcribe them, which makes every window of width <= w complete.
    std::vector<std::vector<std::uint8_t>> codes;
    for (Index alpha = 0; alpha < stages; ++alpha) {
        bool placed = false;
        for (int attempt = 0; attempt < 20000 && !placed; ++attempt) {
            std::vector<std::uint8_t> cand(code_rows);
            for (auto& b : cand) b = static_cast<std::uint8_t>(rng() & 1);
            bool good = true;
            for (int width = 1; width <= w && good; ++width) {
                good = code_compatible(codes, cand, width);
            }
            if (good) {
                codes.push_back(std::move(cand));
                placed = true;
            }
        }
        if (!placed) {
            throw ValidationError("pattern_width: could not complete column " +
                                  std::to_string(alpha) + "; add rows above stages");
        }
    }

    std::vector<std::vector<std::uint8_t>> rows;
    rows.reserve(ground - base);
    for (Index xi = base; xi < ground; ++xi) {
        std::vector<std::uint8_t> row(xi);
        for (auto& b : row) b = static_cast<std::uint8_t>(rng() & 1);
        if (xi >= stages) {
            for (Index alpha = 0; alpha < stages; ++alpha) row[alpha] = codes[alpha][xi - stages];
        }
        rows.push_back(std::move(row));
    }
    return TMatrix(base, ground, std::move(rows));
}

std::vector<Functional> init_base(const DriverConfig& cfg, const TMatrix& t) {
    std::vector<Functional> out;
    out.reserve(cfg.base);
    for (Index alpha = 0; alpha < cfg.base; ++alpha) {
        Functional psi(cfg.ground_size);
        for (Index xi = cfg.base; xi < cfg.ground_size; ++xi) psi.set_bit(xi, t.bit(xi, alpha));
        out.push_back(std::move(psi));
    }
    return out;
}

void validate_assignment(Index stage, const StageAssignment& a, const DriverConfig& cfg) {
    const std::string at = "assignments[" + std::to_string(stage) + "]";
    if (stage < cfg.base || stage >= cfg.stages) {
        throw ValidationError(at + ": stage outside [base, stages)");
    }
    if (a.h_table) {
        if (a.h_table->bound() > stage) {
            throw ScheduleSupportError(at + ".h_table: supports must stay below the stage");
        }
        if (a.h_table->m() > cfg.k) {
            throw ValidationError(at + ".h_table: m exceeds k");
        }
    }
    if (a.f_task) {
        const FTask& task = *a.f_task;
        if (task.targets.size() != static_cast<std::size_t>(cfg.k) + 1) {
            throw ValidationError(at + ".f_task: expected k+1 targets");
        }
        for (const FinVec& v : task.vectors) {
            if (!v.empty() && v.max() >= stage) {
                throw ScheduleSupportError(at + ".f_task: vector support past the stage");
            }
        }
        for (const FinVec& v : task.targets) {
            if (!v.empty() && v.max() >= stage) {
                throw ScheduleSupportError(at + ".f_task: target support past the stage");
            }
        }
        if (auto verdict = is_independent(task.vectors); !verdict.independent) {
            throw DependentFamilyError(at + ".f_task: vector family is dependent");
        }
        if (task.vectors.size() + cfg.min_codimension > stage) {
            throw CodimensionError(at + ".f_task: codimension below the configured minimum");
        }
    }
}

std::vector<PlannedItem> plan_stage_schedule(Index gamma, std::span<const Functional> prior,
                                             const AssignmentMap& assignments,
                                             const DriverConfig& cfg) {
    std::vector<PlannedItem> items;
    const int nsigma_limit = 1 << 16;
    for (const auto& [beta, assignment] : assignments) {
        if (beta > gamma || !assignment.h_table) continue;
        const HTable& table = *assignment.h_table;
        const int m = table.m();
        const int nsigma = 1 << m;
        if (nsigma > nsigma_limit) throw ValidationError("table arity too large");
        const int width_next = static_cast<int>(gamma + 1 - beta);

        if (width_next * m <= cfg.density_budget) {
            // Steered mode: every column gets pinned this stage; within each
            // history class over [beta, gamma) the sigmas round-robin, so each
            // class keeps realizing every sigma while classes stay balanced.
            std::map<std::vector<std::uint8_t>, int> class_seen;
            std::vector<int> sigma_pins(nsigma, 0);
            for (int n : table.columns()) {
                std::vector<std::uint8_t> tau;
                for (Index g = beta; g < gamma; ++g) {
                    for (int i = 0; i < m; ++i) tau.push_back(prior[g].eval(table.entry(i, n)));
                }
                int j = class_seen[tau]++;
                int s = j % nsigma;
                ++sigma_pins[s];
                items.push_back(PlannedItem{beta, sigma_of(s, m), {n}});
            }
            for (int s = 0; s < nsigma; ++s) {
                for (int extra = sigma_pins[s]; extra < cfg.repetition; ++extra) {
                    items.push_back(PlannedItem{beta, sigma_of(s, m), {}});
                }
            }
        } else {
            for (int s = 0; s < nsigma; ++s) {
                for (int rep = 0; rep < cfg.repetition; ++rep) {
                    items.push_back(PlannedItem{beta, sigma_of(s, m), {}});
                }
            }
        }
    }
    return items;
}

StageOutcome run_stage(Index gamma, std::span<const Functional> prior,
                       const AssignmentMap& assignments, const TMatrix& t,
                       const DriverConfig& cfg) {
    std::vector<FinVec> h_family;
    std::vector<FinVec> targets(static_cast<std::size_t>(cfg.k) + 1);
    auto self = assignments.find(gamma);
    if (self != assignments.end() && self->second.f_task) {
        h_family = self->second.f_task->vectors;
        targets = self->second.f_task->targets;
    }

    std::vector<PlannedItem> planned = plan_stage_schedule(gamma, prior, assignments, cfg);
    std::vector<ScheduleItem> schedule;
    schedule.reserve(planned.size());
    for (const PlannedItem& p : planned) {
        schedule.push_back(ScheduleItem{&*assignments.at(p.table_stage).h_table, p.sigma,
                                        p.candidates, static_cast<int>(p.table_stage)});
    }

    ReducedBuildResult reduced;
    try {
        reduced = build_psi_reduced(cfg.k, targets, h_family, schedule, gamma,
                                    cfg.min_codimension, cfg.claim_budget);
    } catch (const ClaimSearchExhaustedError& e) {
        throw ClaimSearchExhaustedError("stage " + std::to_string(gamma) + ": " + e.what());
    } catch (const CodimensionError& e) {
        throw CodimensionError("stage " + std::to_string(gamma) + ": " + e.what());
    }

    Functional psi(cfg.ground_size);
    for (Index b = 0; b < gamma; ++b) psi.set_bit(b, reduced.psi.bit(b));
    psi.set_bit(gamma, 0);  // own singleton stays zero
    for (Index xi = gamma + 1; xi < cfg.ground_size; ++xi) {
        psi.set_bit(xi, t.has_row(xi) ? t.bit(xi, gamma) : 0);
    }

    StageOutcome out;
    out.psi = std::move(psi);
    out.trace = std::move(reduced.trace);
    out.schedule = std::move(planned);
    out.probe_bound = static_cast<Index>(h_family.size());
    return out;
}

DriverRun run_driver(const DriverConfig& cfg, const TMatrix& t,
                     const AssignmentMap& assignments) {
    cfg.validate();
    if (t.base() != cfg.base || t.ground() != cfg.ground_size) {
        throw ValidationError("t_rows: dimensions differ from the config");
    }
    for (const auto& [stage, assignment] : assignments) {
        validate_assignment(stage, assignment, cfg);
    }

    DriverRun run;
    run.psis = init_base(cfg, t);
    run.outcomes.assign(cfg.base, std::nullopt);
    for (Index gamma = cfg.base; gamma < cfg.stages; ++gamma) {
        StageOutcome outcome = run_stage(gamma, run.psis, assignments, t, cfg);
        run.psis.push_back(outcome.psi);
        run.outcomes.push_back(std::move(outcome));
    }
    return run;
}

GeneratorMatrix extract_generators(std::span<const Functional> psis, Index ground_size) {
    GeneratorMatrix m;
    m.rows = ground_size;
    m.cols = static_cast<Index>(psis.size());
    m.x.assign(ground_size, std::vector<std::uint8_t>(psis.size(), 0));
    for (Index alpha = 0; alpha < m.cols; ++alpha) {
        for (Index xi = 0; xi < ground_size; ++xi) m.x[xi][alpha] = psis[alpha].bit(xi);
    }
    return m;
}

}  // namespace gf2gen
