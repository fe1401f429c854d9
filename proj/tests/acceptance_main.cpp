// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gf2gen/basis_map.hpp"
#include "gf2gen/certificate.hpp"
#include "gf2gen/echelon.hpp"
#include "gf2gen/errors.hpp"
#include "gf2gen/verifiers.hpp"
#include "oracle.hpp"

using namespace gf2gen;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, bool pass, const std::string& detail, double seconds) {
    std::printf("criterion %d: %s - %s (%.2f s)\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str(), seconds);
    if (!pass) ++g_failures;
}

HTable singleton_table(std::vector<int> columns, std::vector<FinVec> vecs, Index bound) {
    std::vector<std::vector<FinVec>> entries;
    for (FinVec& v : vecs) entries.push_back({std::move(v)});
    return HTable::create(1, std::move(columns), std::move(entries), bound);
}

// --- criterion 1: oracle equivalence ---------------------------------------

void criterion_1() {
    Timer timer;
    std::mt19937_64 rng(1001);
    int cases = 0;
    bool ok = true;
    std::string detail;
    while (cases < 10000 && ok) {
        auto family = oracle::random_family(rng, 12, 12);
        ++cases;
        bool fast = is_independent(family).independent;
        bool slow = oracle::independent(family);
        std::size_t fast_rank = rank(family);
        std::size_t slow_rank = oracle::rank(family);
        if (fast != slow || fast_rank != slow_rank ||
            fast != (fast_rank == family.size())) {
            ok = false;
            detail = "mismatch at case " + std::to_string(cases);
        }
    }
    double secs = timer.seconds();
    if (ok && secs > 10.0) {
        ok = false;
        detail = "over the 10 s budget";
    }
    if (ok) detail = std::to_string(cases) + " random families agree with the subset oracle";
    report(1, ok, detail, secs);
}

// --- criterion 2: staged construction conclusions ---------------------------

struct BuildInstance {
    int k = 1;
    Index ground = 64;
    std::vector<FinVec> targets;
    HTable table;
    std::vector<std::vector<std::uint8_t>> sigmas;
    int reps = 3;
};

BuildInstance make_build_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    BuildInstance inst;
    inst.k = 1 + static_cast<int>(seed % 3);
    int m = (inst.k == 2 && (rng() & 1)) ? 2 : 1;
    const Index base = 8;
    const int ncols = 8;

    std::vector<int> columns;
    std::vector<std::vector<FinVec>> entries;
    for (int j = 0; j < ncols; ++j) {
        columns.push_back(j);
        std::vector<FinVec> group;
        for (int i = 0; i < m; ++i) {
            // One high anchor per entry, strided a full block apart, plus
            // optional low noise that the probe segment will swallow.
            std::set<Index> support{base + static_cast<Index>((j * m + i) * (inst.k + 1))};
            if (rng() & 1) support.insert(static_cast<Index>(rng() % 6));
            group.push_back(FinVec(std::vector<Index>(support.begin(), support.end())));
        }
        entries.push_back(std::move(group));
    }
    inst.table = HTable::create(m, std::move(columns), std::move(entries), inst.ground);

    for (int i = 0; i <= inst.k; ++i) {
        if (i == 0 && (rng() % 4) == 0) {
            inst.targets.push_back(FinVec{});
            continue;
        }
        std::set<Index> support;
        std::size_t len = 1 + rng() % 3;
        for (std::size_t e = 0; e < len; ++e) support.insert(static_cast<Index>(rng() % base));
        inst.targets.push_back(FinVec(std::vector<Index>(support.begin(), support.end())));
    }

    if (m == 1) {
        inst.sigmas = {{0}, {1}};
    } else {
        inst.sigmas = {{0, 0}, {1, 1}};
    }
    return inst;
}

void criterion_2() {
    Timer timer;
    bool ok = true;
    std::string detail;
    int instances = 0;
    for (std::uint64_t seed = 0; seed < 102 && ok; ++seed) {
        BuildInstance inst = make_build_instance(seed);
        std::vector<ScheduleItem> schedule;
        for (const auto& sigma : inst.sigmas) {
            for (int rep = 0; rep < inst.reps; ++rep) {
                schedule.push_back(ScheduleItem{&inst.table, sigma, {}, 0});
            }
        }
        ++instances;
        BuildResult r;
        try {
            r = build_psi(inst.k, inst.targets, schedule, inst.ground, kWholeGround, 256);
        } catch (const Error& e) {
            ok = false;
            detail = "instance " + std::to_string(seed) + " failed to build: " + e.what();
            break;
        }

        if (!inst.targets[0].empty() && r.psi.eval(inst.targets[0]) != 1) {
            ok = false;
            detail = "instance " + std::to_string(seed) + ": conclusion i violated";
            break;
        }
        for (int n = 0; n < probe_block_count(inst.k, inst.ground); ++n) {
            bool agree = true;
            for (int i = 0; i <= inst.k && agree; ++i) {
                agree = r.psi.eval(inst.targets[i]) ==
                        r.psi.bit(static_cast<Index>(n * (inst.k + 1) + i));
            }
            if (agree && n >= r.trace.n0) {
                ok = false;
                detail = "instance " + std::to_string(seed) + ": agreement block " +
                         std::to_string(n) + " past N_0";
                break;
            }
        }
        if (!ok) break;
        for (const auto& sigma : inst.sigmas) {
            std::set<int> realizing;
            for (const StepRecord& s : r.trace.steps) {
                if (s.sigma != sigma) continue;
                bool match = true;
                for (int i = 0; i < inst.table.m() && match; ++i) {
                    match = r.psi.eval(inst.table.entry(i, s.n)) == sigma[i];
                }
                if (match) realizing.insert(s.n);
            }
            if (realizing.size() < 3) {
                ok = false;
                detail = "instance " + std::to_string(seed) + ": sigma realized only " +
                         std::to_string(realizing.size()) + " times";
                break;
            }
        }
    }
    double secs = timer.seconds();
    if (ok && secs > 30.0) {
        ok = false;
        detail = "over the 30 s budget";
    }
    if (ok) {
        detail = std::to_string(instances) +
                 " staged builds satisfy the three conclusions at R=3";
    }
    report(2, ok, detail, secs);
}

// --- criterion 3: claim search bound ----------------------------------------

void criterion_3() {
    Timer timer;
    bool ok = true;
    std::string detail;
    int checked = 0;
    for (int m = 1; m <= 3 && ok; ++m) {
        for (int esize = 0; esize <= 6 && ok; ++esize) {
            std::vector<Index> e_elems;
            for (int e = 0; e < esize; ++e) e_elems.push_back(static_cast<Index>(e));
            FinVec e_set(e_elems);
            const int bound = ((1 << m) - 1) * (1 << esize) + 1;

            // Adversarial: a maximal prefix of blocked columns. A valid table
            // can block at most |E| columns (their in-span sums must stay
            // independent), followed by enough clean ones to fill the bound.
            std::vector<int> columns;
            std::vector<std::vector<FinVec>> entries;
            Index fresh = 100;
            for (int j = 0; j < esize; ++j) {
                std::vector<FinVec> group;
                // Sum over all i of the group equals the span member {j}.
                std::vector<Index> head{static_cast<Index>(j)};
                for (int i = 1; i < m; ++i) {
                    group.push_back(FinVec{fresh});
                    head.push_back(fresh);
                    ++fresh;
                }
                group.insert(group.begin(), FinVec(head));
                columns.push_back(j);
                entries.push_back(std::move(group));
            }
            for (int j = esize; j < bound + 2; ++j) {
                std::vector<FinVec> group;
                for (int i = 0; i < m; ++i) group.push_back(FinVec{fresh++});
                columns.push_back(j);
                entries.push_back(std::move(group));
            }
            HTable table = HTable::create(m, std::move(columns), std::move(entries), fresh + 1);

            std::vector<int> search(table.columns().begin(), table.columns().end());
            int n = find_claim_n(e_set, table, search);
            ++checked;
            int position = n + 1;  // columns are labelled 0..; position in search order
            if (n != esize || position > bound) {
                ok = false;
                detail = "m=" + std::to_string(m) + " |E|=" + std::to_string(esize) +
                         ": found at position " + std::to_string(position) + ", bound " +
                         std::to_string(bound);
            }
        }
    }
    double secs = timer.seconds();
    if (ok) {
        detail = std::to_string(checked) +
                 " adversarial tables stayed within (2^m-1)*2^|E|+1 candidates";
    }
    report(3, ok, detail, secs);
}

// --- criterion 4: basis transport -------------------------------------------

void criterion_4() {
    Timer timer;
    bool ok = true;
    std::string detail;

    // Exhaustive linearity and prefix identity on small grounds.
    for (Index ground = 2; ground <= 6 && ok; ++ground) {
        std::vector<FinVec> h{FinVec{0, ground - 1}};
        BasisMap map = BasisMap::create(h, ground);
        for (unsigned a = 0; a < (1u << ground) && ok; ++a) {
            std::vector<Index> ea;
            for (Index i = 0; i < ground; ++i) {
                if (a & (1u << i)) ea.push_back(i);
            }
            FinVec va(ea);
            for (unsigned b = 0; b < (1u << ground) && ok; ++b) {
                std::vector<Index> eb;
                for (Index i = 0; i < ground; ++i) {
                    if (b & (1u << i)) eb.push_back(i);
                }
                FinVec vb(eb);
                if (map.forward(sym_diff(va, vb)) !=
                    sym_diff(map.forward(va), map.forward(vb))) {
                    ok = false;
                    detail = "linearity fails exhaustively at ground " + std::to_string(ground);
                }
            }
        }
        for (std::size_t j = 0; ok && j < map.ordered_basis().size(); ++j) {
            if (map.forward(map.ordered_basis()[j]) != FinVec{static_cast<Index>(j)}) {
                ok = false;
                detail = "prefix identity fails at ground " + std::to_string(ground);
            }
        }
    }

    // Random linearity at ground <= 32.
    std::mt19937_64 rng(4001);
    int pairs = 0;
    for (int it = 0; it < 20 && ok; ++it) {
        Index ground = 12 + rng() % 21;
        std::vector<FinVec> h;
        for (int v = 0; v < 6; ++v) {
            FinVec cand = oracle::random_vec(rng, ground, 5);
            std::vector<FinVec> probe(h);
            probe.push_back(cand);
            if (is_independent(probe).independent) h = std::move(probe);
        }
        BasisMap map = BasisMap::create(h, ground);
        for (int p = 0; p < 50 && ok; ++p, ++pairs) {
            FinVec a = oracle::random_vec(rng, ground, 6);
            FinVec b = oracle::random_vec(rng, ground, 6);
            if (map.forward(sym_diff(a, b)) != sym_diff(map.forward(a), map.forward(b))) {
                ok = false;
                detail = "random linearity fails";
            }
        }
        for (std::size_t j = 0; ok && j < h.size(); ++j) {
            if (map.forward(h[j]) != FinVec{static_cast<Index>(j)}) {
                ok = false;
                detail = "random prefix identity fails";
            }
        }
    }

    // Reduced builds: conclusions I-III verified by direct evaluation.
    int instances = 0;
    for (std::uint64_t seed = 0; seed < 52 && ok; ++seed) {
        std::mt19937_64 irng(seed ^ 0xabcdULL);
        int k = 1 + static_cast<int>(seed % 2);
        Index ground = 40;
        Index fam = 4;
        std::vector<FinVec> h;
        bool anchored = seed % 2 == 0;
        for (Index j = 0; j < fam; ++j) {
            if (anchored) h.push_back(FinVec{j, ground - 1});
            else h.push_back(FinVec{j});
        }
        std::vector<int> columns;
        std::vector<FinVec> vecs;
        const Index band = fam + 6;
        for (int j = 0; j < 8; ++j) {
            columns.push_back(j);
            vecs.push_back(FinVec{band + static_cast<Index>(j * (k + 1))});
        }
        HTable table = singleton_table(std::move(columns), std::move(vecs), ground - 1);
        std::vector<FinVec> targets;
        for (int i = 0; i <= k; ++i) {
            targets.push_back(FinVec{fam + static_cast<Index>(irng() % 4)});
        }
        std::vector<ScheduleItem> schedule;
        for (std::uint8_t s : {0, 1}) {
            for (int rep = 0; rep < 2; ++rep) {
                schedule.push_back(ScheduleItem{&table, {s}, {}, 0});
            }
        }
        ++instances;
        ReducedBuildResult r;
        try {
            r = build_psi_reduced(k, targets, h, schedule, ground, 2, 256);
        } catch (const Error& e) {
            ok = false;
            detail = "reduced instance " + std::to_string(seed) + ": " + e.what();
            break;
        }
        if (!targets[0].empty() && r.psi.eval(targets[0]) != 1) {
            ok = false;
            detail = "reduced instance " + std::to_string(seed) + ": conclusion I violated";
            break;
        }
        for (int n = r.trace.n0; n < probe_block_count(k, fam); ++n) {
            bool agree = true;
            for (int i = 0; i <= k && agree; ++i) {
                agree = r.psi.eval(h[static_cast<std::size_t>(n) * (k + 1) + i]) ==
                        r.psi.eval(targets[i]);
            }
            if (agree) {
                ok = false;
                detail = "reduced instance " + std::to_string(seed) + ": conclusion II violated";
                break;
            }
        }
        if (!ok) break;
        std::set<int> zeros, ones;
        for (const StepRecord& s : r.trace.steps) {
            if (r.psi.eval(table.entry(0, s.n)) != s.sigma[0]) {
                ok = false;
                detail = "reduced instance " + std::to_string(seed) + ": conclusion III violated";
                break;
            }
            (s.sigma[0] ? ones : zeros).insert(s.n);
        }
        if (ok && (zeros.size() < 2 || ones.size() < 2)) {
            ok = false;
            detail = "reduced instance " + std::to_string(seed) + ": too few realizations";
        }
    }

    double secs = timer.seconds();
    if (ok) {
        detail = "transport linearity exhaustive+random (" + std::to_string(pairs) +
                 " pairs), " + std::to_string(instances) + " reduced builds verified";
    }
    report(4, ok, detail, secs);
}

// --- criterion 5: driver conditions on fixture and seeded configs -----------

bool verdict_passes(const Certificate& cert, const std::string& name) {
    for (const VerdictEntry& v : cert.verdicts) {
        if (v.check == name) return v.outcome == CheckOutcome::Pass;
    }
    return false;
}

void criterion_5() {
    Timer timer;
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    int configs = 0;

    std::vector<RunConfig> cfgs;
    try {
        RunConfig fixture = load_config(GF2GEN_FIXTURE_PATH);
        if (fixture.core.k != 1 || fixture.core.base != 4 || fixture.core.stages != 12 ||
            fixture.core.ground_size != 24) {
            ok = false;
            detail = "fixture dimensions off";
        }
        cfgs.push_back(std::move(fixture));
        for (std::uint64_t seed = 1; seed <= 20; ++seed) cfgs.push_back(gen_config(seed, 1, 12));
    } catch (const Error& e) {
        ok = false;
        detail = std::string("config setup: ") + e.what();
    }

    const char* condition_checks[] = {"target-hit", "target-transcription", "agreement-bound",
                                      "window-density", "base-and-diagonal",
                                      "column-consistency"};
    for (std::size_t c = 0; c < cfgs.size() && ok; ++c) {
        Timer one;
        Certificate cert;
        try {
            cert = run_build(cfgs[c]);
            run_verify(cert);
        } catch (const Error& e) {
            ok = false;
            detail = "config " + std::to_string(c) + ": " + e.what();
            break;
        }
        ++configs;
        for (const char* name : condition_checks) {
            if (!verdict_passes(cert, name)) {
                ok = false;
                detail = "config " + std::to_string(c) + ": check " + name + " not passing";
                break;
            }
        }
        worst = std::max(worst, one.seconds());
        if (worst > 60.0) {
            ok = false;
            detail = "config " + std::to_string(c) + " over the 60 s budget";
        }
    }
    if (ok) {
        detail = std::to_string(configs) +
                 " configs (fixture + seeded) pass the four stage conditions, worst " +
                 std::to_string(worst).substr(0, 5) + " s";
    }
    report(5, ok, detail, timer.seconds());
}

// --- criterion 6: witness family, selections, non-accumulation --------------

void criterion_6() {
    Timer timer;
    bool ok = true;
    std::string detail;

    // Exhaustive nonzero-sum guarantee for every split with at most 8 boxes.
    for (int k = 0; k <= 3 && ok; ++k) {
        int count = 8 / (k + 1);
        std::vector<Index> coords;
        for (int c = 0; c < count * (k + 1); ++c) coords.push_back(static_cast<Index>(c));
        auto tuples = build_open_family(k, coords, count);
        std::vector<const OpenBox*> boxes;
        for (const auto& tuple : tuples) {
            for (const OpenBox& b : tuple) boxes.push_back(&b);
        }
        for (std::size_t mask = 1; mask < (1u << boxes.size()) && ok; ++mask) {
            std::size_t lowest = 0;
            while (!(mask & (1u << lowest))) ++lowest;
            std::uint8_t parity = 0;
            for (std::size_t b = 0; b < boxes.size(); ++b) {
                if (!(mask & (1u << b))) continue;
                auto it = boxes[b]->pins.find(coords[lowest]);
                if (it == boxes[b]->pins.end()) {
                    ok = false;
                    detail = "box misses the anchor coordinate";
                    break;
                }
                parity ^= it->second;
            }
            if (ok && parity != 1) {
                ok = false;
                detail = "a selection can cancel at k=" + std::to_string(k);
            }
        }
    }

    // Fixture run: bounded-search selections must exist and stay independent,
    // and every scheduled task verifies its agreement bound over all blocks.
    if (ok) {
        try {
            RunConfig fixture = load_config(GF2GEN_FIXTURE_PATH);
            Certificate cert = run_build(fixture);
            run_verify(cert);
            if (!verdict_passes(cert, "selection-independence")) {
                ok = false;
                detail = "fixture selection check did not pass";
            }
            int tasks = 0;
            for (const auto& [stage, a] : cert.config.assignments) {
                if (!a.f_task) continue;
                ++tasks;
                auto report_na = non_accumulation_witness(cert.stage_psis,
                                                          cert.config.assignments, cert.outcomes,
                                                          *a.f_task, fixture.core.k);
                if (!report_na.matched || !report_na.verified) {
                    ok = false;
                    detail = "task at stage " + std::to_string(stage) + " failed its bound";
                    break;
                }
                FTask unscheduled = *a.f_task;
                unscheduled.vectors.push_back(FinVec{0, 1, 2});
                if (non_accumulation_witness(cert.stage_psis, cert.config.assignments,
                                             cert.outcomes, unscheduled, fixture.core.k)
                        .matched) {
                    ok = false;
                    detail = "unscheduled task spuriously matched";
                    break;
                }
            }
            if (ok && tasks == 0) {
                ok = false;
                detail = "fixture has no scheduled tasks";
            }
        } catch (const Error& e) {
            ok = false;
            detail = e.what();
        }
    }
    if (ok) {
        detail = "255-subset guarantee exhaustive for k=0..3; fixture selections and "
                 "agreement bounds verified";
    }
    report(6, ok, detail, timer.seconds());
}

// --- criterion 7: mutation sensitivity ---------------------------------------

void criterion_7() {
    Timer timer;
    bool ok = true;
    std::string detail;
    int detected = 0, trials = 0;
    try {
        RunConfig fixture = load_config(GF2GEN_FIXTURE_PATH);
        Certificate cert = run_build(fixture);
        std::mt19937_64 rng(7007);
        for (trials = 0; trials < 200; ++trials) {
            Index xi = static_cast<Index>(rng() % cert.matrix.rows);
            Index alpha = static_cast<Index>(rng() % cert.matrix.cols);
            cert.matrix.x[xi][alpha] ^= 1;
            VerifySummary summary = run_verify(cert);
            if (summary.status == CertStatus::Fail) ++detected;
            cert.matrix.x[xi][alpha] ^= 1;
            cert.verdicts.clear();
            cert.status = CertStatus::Unverified;
        }
        ok = detected == trials;
        detail = std::to_string(detected) + "/" + std::to_string(trials) +
                 " single-bit mutations detected";
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(7, ok, detail, timer.seconds());
}

// --- criterion 8: determinism ------------------------------------------------

void criterion_8() {
    Timer timer;
    bool ok = true;
    std::string detail;
    try {
        RunConfig fixture = load_config(GF2GEN_FIXTURE_PATH);
        std::string a = format_certificate(run_build(fixture));
        std::string b = format_certificate(run_build(fixture));
        ok = a == b;
        detail = ok ? "two builds from the fixture are byte-identical"
                    : "certificates differ between identical builds";
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(8, ok, detail, timer.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures) std::printf("%d criterion(s) failing\n", g_failures);
    else std::printf("all 8 criteria passing\n");
    return g_failures == 0 ? 0 : 1;
}
