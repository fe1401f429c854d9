#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "gf2gen/driver.hpp"
#include "gf2gen/echelon.hpp"
#include "gf2gen/errors.hpp"
#include "gf2gen/verifiers.hpp"

using namespace gf2gen;

namespace {

HTable singleton_table(std::vector<int> columns, std::vector<Index> supports, Index bound) {
    std::vector<std::vector<FinVec>> entries;
    for (Index s : supports) entries.push_back({FinVec{s}});
    return HTable::create(1, std::move(columns), std::move(entries), bound);
}

// k=1, base 4, stages 8, ground 16; one table at 4, one task at 6.
struct ToyRun {
    DriverConfig cfg;
    TMatrix t;
    AssignmentMap assignments;
    DriverRun run;
    GeneratorMatrix matrix;

    ToyRun() {
        cfg.k = 1;
        cfg.ground_size = 16;
        cfg.base = 4;
        cfg.stages = 8;
        cfg.repetition = 1;
        cfg.claim_budget = 32;
        cfg.pattern_width = 2;
        cfg.density_budget = 2;
        cfg.min_codimension = 2;
        cfg.seed = 5;
        t = make_pattern_complete_tmatrix(cfg);

        StageAssignment table_stage;
        table_stage.h_table = singleton_table({0, 1, 2, 3}, {0, 1, 2, 3}, 4);
        assignments.emplace(4, std::move(table_stage));

        StageAssignment task_stage;
        FTask task;
        task.vectors = {FinVec{1, 5}, FinVec{2, 5}};
        task.targets = {FinVec{3}, FinVec{4}};
        task_stage.f_task = std::move(task);
        assignments.emplace(6, std::move(task_stage));

        run = run_driver(cfg, t, assignments);
        matrix = extract_generators(run.psis, cfg.ground_size);
    }
};

}  // namespace

TEST_CASE("init_base transcribes target rows above the base") {
    DriverConfig cfg;
    cfg.k = 1;
    cfg.base = 2;
    cfg.stages = 2;
    cfg.ground_size = 4;
    cfg.validate();
    TMatrix t(2, 4, {{1, 0}, {0, 1, 1}});
    auto base = init_base(cfg, t);
    REQUIRE(base.size() == 2);
    CHECK(base[0].bits()[0] == 0);
    CHECK(base[0].bits()[1] == 0);
    CHECK(base[0].bits()[2] == 1);  // t_2(0)
    CHECK(base[0].bits()[3] == 0);  // t_3(0)
    CHECK(base[1].bits()[2] == 0);  // t_2(1)
    CHECK(base[1].bits()[3] == 1);  // t_3(1)
    for (Index alpha = 0; alpha < 2; ++alpha) {
        CHECK(base[alpha].bit(alpha) == 0);
    }

    TMatrix zeros(2, 4, {{0, 0}, {0, 0, 0}});
    for (const Functional& f : init_base(cfg, zeros)) {
        for (std::uint8_t b : f.bits()) CHECK(b == 0);
    }
}

TEST_CASE("driver config validation") {
    DriverConfig cfg;
    cfg.k = 1;
    cfg.base = 4;
    cfg.stages = 8;
    cfg.ground_size = 16;
    CHECK_NOTHROW(cfg.validate());
    cfg.base = 1;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.base = 4;
    cfg.ground_size = 15;  // stages*(k+1) = 16 > 15
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    cfg.ground_size = 16;
    cfg.stages = 3;  // below base
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("assignment validation rejects the named bad inputs") {
    DriverConfig cfg;
    cfg.k = 1;
    cfg.base = 4;
    cfg.stages = 8;
    cfg.ground_size = 16;
    cfg.min_codimension = 2;

    StageAssignment bad_support;
    bad_support.h_table = singleton_table({0}, {5}, 6);  // bound 6 > stage 5
    CHECK_THROWS_AS(validate_assignment(5, bad_support, cfg), ScheduleSupportError);

    StageAssignment bad_task;
    bad_task.f_task = FTask{{FinVec{0}, FinVec{0}}, {FinVec{}, FinVec{}}};
    CHECK_THROWS_AS(validate_assignment(6, bad_task, cfg), DependentFamilyError);

    StageAssignment thin;
    thin.f_task = FTask{{FinVec{0}, FinVec{1}, FinVec{2}, FinVec{3}, FinVec{4}},
                        {FinVec{}, FinVec{}}};
    CHECK_THROWS_AS(validate_assignment(6, thin, cfg), CodimensionError);

    StageAssignment far_target;
    far_target.f_task = FTask{{FinVec{0}}, {FinVec{6}, FinVec{}}};
    CHECK_THROWS_AS(validate_assignment(6, far_target, cfg), ScheduleSupportError);
}

TEST_CASE("a run without assignments produces transcription-only stages") {
    DriverConfig cfg;
    cfg.k = 1;
    cfg.base = 4;
    cfg.stages = 6;
    cfg.ground_size = 12;
    cfg.pattern_width = 1;
    cfg.seed = 3;
    TMatrix t = make_pattern_complete_tmatrix(cfg);
    DriverRun run = run_driver(cfg, t, {});
    for (Index gamma = cfg.base; gamma < cfg.stages; ++gamma) {
        const Functional& psi = run.psis[gamma];
        for (Index b = 0; b <= gamma; ++b) CHECK(psi.bit(b) == 0);
        for (Index xi = gamma + 1; xi < cfg.ground_size; ++xi) {
            CHECK(psi.bit(xi) == t.bit(xi, gamma));
        }
    }
}

TEST_CASE("toy run satisfies the four stage conditions") {
    ToyRun toy;
    const auto& psis = toy.run.psis;

    SUBCASE("first target is sent to one at its stage") {
        CHECK(psis[6].eval(FinVec{3}) == 1);
    }

    SUBCASE("transcription rule and diagonal") {
        for (Index xi = toy.cfg.base; xi < toy.cfg.ground_size; ++xi) {
            Index hi = std::min<Index>(xi, toy.cfg.stages);
            for (Index alpha = 0; alpha < hi; ++alpha) {
                CHECK(toy.matrix.bit(xi, alpha) == toy.t.bit(xi, alpha));
            }
        }
        for (Index gamma = toy.cfg.base; gamma < toy.cfg.stages; ++gamma) {
            CHECK(toy.matrix.bit(gamma, gamma) == 0);
        }
        for (Index alpha = 0; alpha < toy.cfg.base; ++alpha) {
            for (Index xi = 0; xi < toy.cfg.base; ++xi) CHECK(toy.matrix.bit(xi, alpha) == 0);
        }
    }

    SUBCASE("agreement bound holds for the scheduled task") {
        const FTask& task = *toy.assignments.at(6).f_task;
        auto report = non_accumulation_witness(psis, toy.assignments, toy.run.outcomes, task,
                                               toy.cfg.k);
        CHECK(report.matched);
        CHECK(report.stage == 6);
        CHECK(report.verified);
    }

    SUBCASE("window density within the budget") {
        const HTable& table = *toy.assignments.at(4).h_table;
        for (Index gamma_end = 5; gamma_end <= 6; ++gamma_end) {
            auto report = window_density_check(psis, table, 4, gamma_end, toy.cfg.density_budget);
            CHECK(report.pass);
        }
        CHECK_THROWS_AS(window_density_check(psis, table, 4, 8, toy.cfg.density_budget),
                        WindowBudgetError);
    }

    SUBCASE("matrix transposes the stage functionals") {
        for (Index alpha = 0; alpha < toy.cfg.stages; ++alpha) {
            for (Index xi = 0; xi < toy.cfg.ground_size; ++xi) {
                CHECK(toy.matrix.bit(xi, alpha) == psis[alpha].bit(xi));
            }
        }
    }

    SUBCASE("row patterns cover every small window") {
        for (Index c0 = 0; c0 < toy.cfg.stages; ++c0) {
            for (Index c1 = c0 + 1; c1 < toy.cfg.stages; ++c1) {
                auto report = property_p_window_check(toy.matrix, std::vector<Index>{c0, c1});
                CHECK(report.pass);
            }
        }
    }

    SUBCASE("deterministic rebuild") {
        DriverRun again = run_driver(toy.cfg, toy.t, toy.assignments);
        for (Index alpha = 0; alpha < toy.cfg.stages; ++alpha) {
            CHECK(again.psis[alpha] == psis[alpha]);
        }
    }
}

TEST_CASE("toy run keeps an independent row pool of full column rank") {
    ToyRun toy;
    EchelonState pool_state;
    std::vector<Index> pool;
    for (Index xi = 0; xi < toy.matrix.rows; ++xi) {
        FinVec support = bits_support(realize(toy.matrix, FinVec{xi}).bits);
        if (support.empty()) continue;
        if (!pool_state.try_insert(support, xi)) pool.push_back(xi);
    }
    CHECK(pool.size() == toy.cfg.stages);  // the column space is saturated

    // Sampled subsets of pool rows realize independent group elements.
    std::mt19937_64 rng(77);
    for (int it = 0; it < 30; ++it) {
        std::set<Index> subset;
        std::size_t size = 2 + rng() % 5;
        while (subset.size() < size) subset.insert(pool[rng() % pool.size()]);
        std::vector<FinVec> realized;
        for (Index xi : subset) {
            realized.push_back(bits_support(realize(toy.matrix, FinVec{xi}).bits));
        }
        CHECK(is_independent(realized).independent);
    }
}

TEST_CASE("a wider density budget steers width-3 windows") {
    DriverConfig cfg;
    cfg.k = 1;
    cfg.ground_size = 28;
    cfg.base = 4;
    cfg.stages = 14;
    cfg.repetition = 1;
    cfg.claim_budget = 64;
    cfg.pattern_width = 2;
    cfg.density_budget = 3;
    cfg.min_codimension = 2;
    cfg.seed = 9;
    TMatrix t = make_pattern_complete_tmatrix(cfg);

    AssignmentMap assignments;
    StageAssignment a;
    a.h_table = singleton_table({0, 1, 2, 3, 4, 5, 6, 7}, {0, 1, 2, 3, 4, 5, 6, 7}, 9);
    assignments.emplace(9, std::move(a));

    DriverRun run = run_driver(cfg, t, assignments);
    const HTable& table = *assignments.at(9).h_table;
    for (Index gamma_end = 10; gamma_end <= 12; ++gamma_end) {
        auto report = window_density_check(run.psis, table, 9, gamma_end, cfg.density_budget);
        CHECK(report.pass);
        CHECK(report.realizing.size() == (1u << (gamma_end - 9)));
    }
}

TEST_CASE("a two-component table steers its sigma patterns") {
    DriverConfig cfg;
    cfg.k = 2;
    cfg.ground_size = 36;
    cfg.base = 4;
    cfg.stages = 12;
    cfg.repetition = 1;
    cfg.claim_budget = 64;
    cfg.pattern_width = 2;
    cfg.density_budget = 2;
    cfg.min_codimension = 2;
    cfg.seed = 11;
    TMatrix t = make_pattern_complete_tmatrix(cfg);

    std::vector<std::vector<FinVec>> entries;
    for (int n = 0; n < 4; ++n) {
        entries.push_back({FinVec{static_cast<Index>(2 * n)}, FinVec{static_cast<Index>(2 * n + 1)}});
    }
    AssignmentMap assignments;
    StageAssignment a;
    a.h_table = HTable::create(2, {0, 1, 2, 3}, entries, 9);
    assignments.emplace(9, std::move(a));

    DriverRun run = run_driver(cfg, t, assignments);
    const HTable& table = *assignments.at(9).h_table;
    // The budget admits width-one windows only (width * m <= 2); the single
    // steered stage must realize all four sigma patterns at once.
    auto report = window_density_check(run.psis, table, 9, 10, cfg.density_budget);
    CHECK(report.pass);
    CHECK(report.realizing.size() == 4);
}

TEST_CASE("stage errors carry their stage context") {
    DriverConfig cfg;
    cfg.k = 1;
    cfg.base = 4;
    cfg.stages = 6;
    cfg.ground_size = 12;
    cfg.pattern_width = 1;
    cfg.repetition = 1;
    cfg.min_codimension = 0;
    TMatrix t = make_pattern_complete_tmatrix(cfg);

    // Stage 4 succeeds, but at stage 5 both table entries transport onto
    // the task family's positions, which the probe segment swallows.
    AssignmentMap bad;
    StageAssignment table_only;
    table_only.h_table = singleton_table({0, 1}, {0, 1}, 4);
    bad.emplace(4, std::move(table_only));
    StageAssignment task_only;
    task_only.f_task = FTask{{FinVec{0}, FinVec{1}}, {FinVec{2}, FinVec{2}}};
    bad.emplace(5, std::move(task_only));

    CHECK_THROWS_WITH_AS(run_driver(cfg, t, bad), doctest::Contains("stage 5"),
                         ClaimSearchExhaustedError);
}
