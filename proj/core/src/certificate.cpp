#include "gf2gen/certificate.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gf2gen/errors.hpp"
#include "gf2gen/verifiers.hpp"

namespace gf2gen {

using nlohmann::json;

std::string digest64(const std::string& payload) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : payload) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

namespace {

std::string sigma_to_string(std::span<const std::uint8_t> sigma) {
    std::string s;
    for (std::uint8_t b : sigma) s += b ? '1' : '0';
    return s;
}

std::vector<std::uint8_t> sigma_from_string(const std::string& s) {
    std::vector<std::uint8_t> sigma;
    for (char c : s) {
        if (c != '0' && c != '1') throw ValidationError("sigma: expected a 0/1 string");
        sigma.push_back(c == '1');
    }
    return sigma;
}

json htable_to_json(const HTable& t) {
    json j;
    j["m"] = t.m();
    j["columns"] = std::vector<int>(t.columns().begin(), t.columns().end());
    json entries = json::array();
    for (int n : t.columns()) {
        json group = json::array();
        for (int i = 0; i < t.m(); ++i) group.push_back(format_finvec(t.entry(i, n)));
        entries.push_back(std::move(group));
    }
    j["entries"] = std::move(entries);
    return j;
}

HTable htable_from_json(const json& j, Index bound, const std::string& at) {
    try {
        int m = j.at("m").get<int>();
        std::vector<int> columns = j.at("columns").get<std::vector<int>>();
        std::vector<std::vector<FinVec>> entries;
        for (const json& group : j.at("entries")) {
            std::vector<FinVec> vecs;
            for (const json& v : group) vecs.push_back(parse_finvec(v.get<std::string>()));
            entries.push_back(std::move(vecs));
        }
        return HTable::create(m, std::move(columns), std::move(entries), bound);
    } catch (const json::exception& e) {
        throw ValidationError(at + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(at + ": " + e.what());
    }
}

json ftask_to_json(const FTask& t) {
    json j;
    json vectors = json::array();
    for (const FinVec& v : t.vectors) vectors.push_back(format_finvec(v));
    json targets = json::array();
    for (const FinVec& v : t.targets) targets.push_back(format_finvec(v));
    j["vectors"] = std::move(vectors);
    j["targets"] = std::move(targets);
    return j;
}

FTask ftask_from_json(const json& j, const std::string& at) {
    try {
        FTask t;
        for (const json& v : j.at("vectors")) t.vectors.push_back(parse_finvec(v.get<std::string>()));
        for (const json& v : j.at("targets")) t.targets.push_back(parse_finvec(v.get<std::string>()));
        return t;
    } catch (const json::exception& e) {
        throw ValidationError(at + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(at + ": " + e.what());
    }
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["k"] = cfg.core.k;
    j["ground_size"] = cfg.core.ground_size;
    j["base"] = cfg.core.base;
    j["stages"] = cfg.core.stages;
    j["repetition"] = cfg.core.repetition;
    j["claim_budget"] = cfg.core.claim_budget;
    j["pattern_width"] = cfg.core.pattern_width;
    j["density_budget"] = cfg.core.density_budget;
    j["min_codimension"] = cfg.core.min_codimension;
    j["combo_search_limit"] = cfg.core.combo_search_limit;
    j["family_samples"] = cfg.core.family_samples;
    j["seed"] = cfg.core.seed;

    json rows = json::array();
    for (Index xi = cfg.core.base; xi < cfg.core.ground_size; ++xi) {
        json r;
        r["xi"] = xi;
        r["bits"] = bits_to_hex(cfg.t.row(xi));
        rows.push_back(std::move(r));
    }
    j["t_rows"] = std::move(rows);

    json assignments = json::array();
    for (const auto& [stage, a] : cfg.assignments) {
        json entry;
        entry["stage"] = stage;
        if (a.h_table) entry["h_table"] = htable_to_json(*a.h_table);
        if (a.f_task) entry["f_task"] = ftask_to_json(*a.f_task);
        assignments.push_back(std::move(entry));
    }
    j["assignments"] = std::move(assignments);
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    try {
        cfg.core.k = j.at("k").get<int>();
        cfg.core.ground_size = j.at("ground_size").get<Index>();
        cfg.core.base = j.at("base").get<Index>();
        cfg.core.stages = j.at("stages").get<Index>();
        cfg.core.repetition = j.at("repetition").get<int>();
        cfg.core.claim_budget = j.at("claim_budget").get<int>();
        cfg.core.pattern_width = j.at("pattern_width").get<int>();
        cfg.core.density_budget = j.at("density_budget").get<int>();
        cfg.core.min_codimension = j.at("min_codimension").get<Index>();
        cfg.core.combo_search_limit = j.at("combo_search_limit").get<int>();
        cfg.core.family_samples = j.at("family_samples").get<int>();
        cfg.core.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    cfg.core.validate();

    std::vector<std::vector<std::uint8_t>> rows(cfg.core.ground_size - cfg.core.base);
    std::vector<bool> seen(cfg.core.ground_size, false);
    for (const json& r : j.at("t_rows")) {
        Index xi;
        std::string bits;
        try {
            xi = r.at("xi").get<Index>();
            bits = r.at("bits").get<std::string>();
        } catch (const json::exception& e) {
            throw ValidationError(std::string("t_rows: ") + e.what());
        }
        if (xi < cfg.core.base || xi >= cfg.core.ground_size) {
            throw ValidationError("t_rows: row index outside [base, ground_size)");
        }
        if (seen[xi]) throw ValidationError("t_rows: duplicate row " + std::to_string(xi));
        seen[xi] = true;
        rows[xi - cfg.core.base] = hex_to_bits(bits, xi);
    }
    cfg.t = TMatrix(cfg.core.base, cfg.core.ground_size, std::move(rows));

    if (j.contains("assignments")) {
        for (const json& entry : j.at("assignments")) {
            Index stage;
            try {
                stage = entry.at("stage").get<Index>();
            } catch (const json::exception& e) {
                throw ValidationError(std::string("assignments: ") + e.what());
            }
            const std::string at = "assignments[" + std::to_string(stage) + "]";
            if (cfg.assignments.count(stage)) throw ValidationError(at + ": duplicate stage");
            StageAssignment a;
            if (entry.contains("h_table")) {
                a.h_table = htable_from_json(entry.at("h_table"), stage, at + ".h_table");
            }
            if (entry.contains("f_task")) {
                a.f_task = ftask_from_json(entry.at("f_task"), at + ".f_task");
            }
            validate_assignment(stage, a, cfg.core);
            cfg.assignments.emplace(stage, std::move(a));
        }
    }
    return cfg;
}

json trace_to_json(const BuildTrace& t) {
    json j;
    j["k"] = t.k;
    j["probe_bound"] = t.probe_bound;
    j["n0"] = t.n0;
    json steps = json::array();
    for (const StepRecord& s : t.steps) {
        json e;
        e["l"] = s.l;
        e["label"] = s.label;
        e["sigma"] = sigma_to_string(s.sigma);
        e["n"] = s.n;
        e["mark_next"] = s.mark_next;
        json picks = json::array();
        for (const auto& [n, i] : s.picks) picks.push_back(json::array({n, i}));
        e["picks"] = std::move(picks);
        json cons = json::array();
        for (const auto& [vec, bit] : s.constraints) {
            cons.push_back(json::array({format_finvec(vec), bit}));
        }
        e["constraints"] = std::move(cons);
        steps.push_back(std::move(e));
    }
    j["steps"] = std::move(steps);
    json tail = json::array();
    for (const TailRecord& r : t.tail) tail.push_back(json::array({r.n, r.cell, r.bit}));
    j["tail"] = std::move(tail);
    return j;
}

BuildTrace trace_from_json(const json& j) {
    BuildTrace t;
    t.k = j.at("k").get<int>();
    t.probe_bound = j.at("probe_bound").get<Index>();
    t.n0 = j.at("n0").get<int>();
    for (const json& e : j.at("steps")) {
        StepRecord s;
        s.l = e.at("l").get<int>();
        s.label = e.at("label").get<int>();
        s.sigma = sigma_from_string(e.at("sigma").get<std::string>());
        s.n = e.at("n").get<int>();
        s.mark_next = e.at("mark_next").get<int>();
        for (const json& p : e.at("picks")) s.picks[p.at(0).get<int>()] = p.at(1).get<int>();
        for (const json& c : e.at("constraints")) {
            s.constraints.emplace_back(parse_finvec(c.at(0).get<std::string>()),
                                       c.at(1).get<std::uint8_t>());
        }
        t.steps.push_back(std::move(s));
    }
    for (const json& r : j.at("tail")) {
        t.tail.push_back(TailRecord{r.at(0).get<int>(), r.at(1).get<int>(),
                                    r.at(2).get<std::uint8_t>()});
    }
    return t;
}

json outcome_to_json(const StageOutcome& o, Index ground) {
    json j;
    j["functional"] = bits_to_hex(std::vector<std::uint8_t>(o.psi.bits().begin(),
                                                            o.psi.bits().end()));
    (void)ground;
    j["trace"] = trace_to_json(o.trace);
    json schedule = json::array();
    for (const PlannedItem& p : o.schedule) {
        json e;
        e["table_stage"] = p.table_stage;
        e["sigma"] = sigma_to_string(p.sigma);
        e["candidates"] = p.candidates;
        schedule.push_back(std::move(e));
    }
    j["schedule"] = std::move(schedule);
    j["probe_bound"] = o.probe_bound;
    return j;
}

const char* status_name(CertStatus s) {
    switch (s) {
        case CertStatus::Unverified: return "unverified";
        case CertStatus::Pass: return "pass";
        case CertStatus::Fail: return "fail";
        case CertStatus::Inconclusive: return "inconclusive";
    }
    return "unverified";
}

CertStatus status_from_name(const std::string& s) {
    if (s == "unverified") return CertStatus::Unverified;
    if (s == "pass") return CertStatus::Pass;
    if (s == "fail") return CertStatus::Fail;
    if (s == "inconclusive") return CertStatus::Inconclusive;
    throw MalformedCertificateError("unknown status: " + s);
}

const char* outcome_name(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::Pass: return "pass";
        case CheckOutcome::Fail: return "fail";
        case CheckOutcome::Inconclusive: return "inconclusive";
    }
    return "fail";
}

CheckOutcome outcome_from_name(const std::string& s) {
    if (s == "pass") return CheckOutcome::Pass;
    if (s == "fail") return CheckOutcome::Fail;
    if (s == "inconclusive") return CheckOutcome::Inconclusive;
    throw MalformedCertificateError("unknown outcome: " + s);
}

}  // namespace

std::string format_config(const RunConfig& cfg) { return config_to_json(cfg).dump(1) + "\n"; }

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse: ") + e.what());
    }
    return config_from_json(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::string tmatrix_digest(const RunConfig& cfg) {
    std::string payload;
    for (Index xi = cfg.core.base; xi < cfg.core.ground_size; ++xi) {
        payload += bits_to_hex(cfg.t.row(xi));
        payload += '\n';
    }
    return digest64(payload);
}

}  // namespace

std::string format_certificate(const Certificate& cert) {
    json j;
    j["format_version"] = cert.format_version;
    j["config"] = config_to_json(cert.config);
    j["t_digest"] = tmatrix_digest(cert.config);
    json stages = json::array();
    for (std::size_t alpha = 0; alpha < cert.stage_psis.size(); ++alpha) {
        json e;
        e["stage"] = alpha;
        e["functional"] = cert.stage_psis[alpha].to_hex();
        if (alpha < cert.outcomes.size() && cert.outcomes[alpha]) {
            e["build"] = outcome_to_json(*cert.outcomes[alpha], cert.config.core.ground_size);
        }
        stages.push_back(std::move(e));
    }
    j["stages"] = std::move(stages);
    json matrix = json::array();
    for (Index xi = 0; xi < cert.matrix.rows; ++xi) matrix.push_back(bits_to_hex(cert.matrix.x[xi]));
    j["matrix"] = std::move(matrix);
    json verdicts = json::array();
    for (const VerdictEntry& v : cert.verdicts) {
        json e;
        e["check"] = v.check;
        e["digest"] = v.digest;
        e["outcome"] = outcome_name(v.outcome);
        e["witnesses"] = v.witnesses;
        verdicts.push_back(std::move(e));
    }
    j["verdicts"] = std::move(verdicts);
    j["status"] = status_name(cert.status);
    return j.dump(1) + "\n";
}

Certificate parse_certificate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedCertificateError(std::string("certificate parse: ") + e.what());
    }
    Certificate cert;
    try {
        cert.format_version = j.at("format_version").get<int>();
        if (cert.format_version != 1) {
            throw MalformedCertificateError("unsupported format_version");
        }
        cert.config = config_from_json(j.at("config"));
        if (j.at("t_digest").get<std::string>() != tmatrix_digest(cert.config)) {
            throw MalformedCertificateError("t_digest does not match the embedded rows");
        }
        const Index ground = cert.config.core.ground_size;
        const Index stages = cert.config.core.stages;

        for (const json& e : j.at("stages")) {
            Index alpha = e.at("stage").get<Index>();
            if (alpha != cert.stage_psis.size()) {
                throw MalformedCertificateError("stages: out of order");
            }
            cert.stage_psis.push_back(
                Functional::from_hex(e.at("functional").get<std::string>(), ground));
            if (e.contains("build")) {
                const json& b = e.at("build");
                StageOutcome o;
                o.psi = Functional::from_hex(b.at("functional").get<std::string>(), ground);
                o.trace = trace_from_json(b.at("trace"));
                for (const json& p : b.at("schedule")) {
                    PlannedItem item;
                    item.table_stage = p.at("table_stage").get<Index>();
                    item.sigma = sigma_from_string(p.at("sigma").get<std::string>());
                    item.candidates = p.at("candidates").get<std::vector<int>>();
                    o.schedule.push_back(std::move(item));
                }
                o.probe_bound = b.at("probe_bound").get<Index>();
                cert.outcomes.resize(alpha);
                cert.outcomes.push_back(std::move(o));
            }
        }
        cert.outcomes.resize(cert.stage_psis.size());
        if (cert.stage_psis.size() != stages) {
            throw MalformedCertificateError("stages: expected one functional per stage");
        }

        std::vector<std::vector<std::uint8_t>> rows;
        for (const json& r : j.at("matrix")) {
            rows.push_back(hex_to_bits(r.get<std::string>(), stages));
        }
        if (rows.size() != ground) throw MalformedCertificateError("matrix: wrong row count");
        cert.matrix.rows = ground;
        cert.matrix.cols = stages;
        cert.matrix.x = std::move(rows);

        for (const json& v : j.at("verdicts")) {
            VerdictEntry entry;
            entry.check = v.at("check").get<std::string>();
            entry.digest = v.at("digest").get<std::string>();
            entry.outcome = outcome_from_name(v.at("outcome").get<std::string>());
            entry.witnesses = v.at("witnesses").get<std::string>();
            cert.verdicts.push_back(std::move(entry));
        }
        cert.status = status_from_name(j.at("status").get<std::string>());
    } catch (const json::exception& e) {
        throw MalformedCertificateError(std::string("certificate: ") + e.what());
    } catch (const ValidationError& e) {
        throw MalformedCertificateError(std::string("certificate: ") + e.what());
    }
    return cert;
}

Certificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedCertificateError("cannot open certificate file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_certificate(buf.str());
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << text;
}

Certificate run_build(const RunConfig& cfg) {
    DriverRun run = run_driver(cfg.core, cfg.t, cfg.assignments);
    Certificate cert;
    cert.config = cfg;
    cert.stage_psis = run.psis;
    cert.outcomes = run.outcomes;
    cert.matrix = extract_generators(run.psis, cfg.core.ground_size);
    cert.status = CertStatus::Unverified;
    return cert;
}

// ---------------------------------------------------------------------------
// verification suite
// ---------------------------------------------------------------------------

namespace {

struct CheckContext {
    const Certificate& cert;
    const DriverConfig& core;
    std::vector<VerdictEntry> verdicts;

    void report(const std::string& check, const std::string& inputs, CheckOutcome outcome,
                const std::string& witnesses) {
        verdicts.push_back(VerdictEntry{check, digest64(inputs), outcome, witnesses});
    }
};

std::string matrix_payload(const GeneratorMatrix& m) {
    std::string payload;
    for (Index xi = 0; xi < m.rows; ++xi) payload += bits_to_hex(m.x[xi]) + "\n";
    return payload;
}

void check_column_consistency(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    std::string payload = matrix_payload(cert.matrix);
    for (const Functional& f : cert.stage_psis) payload += f.to_hex() + "\n";
    std::size_t bad = 0;
    std::string first;
    for (Index alpha = 0; alpha < cert.matrix.cols; ++alpha) {
        for (Index xi = 0; xi < cert.matrix.rows; ++xi) {
            if (cert.matrix.bit(xi, alpha) != cert.stage_psis[alpha].bit(xi)) {
                if (bad == 0) {
                    first = "x[" + std::to_string(xi) + "][" + std::to_string(alpha) +
                            "] != stage functional";
                }
                ++bad;
            }
        }
    }
    ctx.report("column-consistency", payload, bad ? CheckOutcome::Fail : CheckOutcome::Pass,
               bad ? first + " (" + std::to_string(bad) + " cells)" : "all cells agree");
}

void check_base_and_diagonal(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    const auto& core = ctx.core;
    std::string bad;
    for (Index alpha = 0; alpha < core.base && bad.empty(); ++alpha) {
        for (Index xi = 0; xi < core.base && bad.empty(); ++xi) {
            if (cert.matrix.bit(xi, alpha) != 0) {
                bad = "base cell x[" + std::to_string(xi) + "][" + std::to_string(alpha) +
                      "] nonzero";
            }
        }
    }
    for (Index gamma = core.base; gamma < core.stages && bad.empty(); ++gamma) {
        if (cert.matrix.bit(gamma, gamma) != 0) {
            bad = "diagonal x[" + std::to_string(gamma) + "] nonzero";
        }
    }
    ctx.report("base-and-diagonal", matrix_payload(cert.matrix),
               bad.empty() ? CheckOutcome::Pass : CheckOutcome::Fail,
               bad.empty() ? "base block and diagonal are zero" : bad);
}

void check_transcription(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    const auto& core = ctx.core;
    std::string payload = matrix_payload(cert.matrix);
    for (Index xi = core.base; xi < core.ground_size; ++xi) {
        payload += bits_to_hex(cert.config.t.row(xi)) + "\n";
    }
    std::size_t bad = 0;
    std::string first;
    for (Index xi = core.base; xi < core.ground_size; ++xi) {
        Index hi = std::min<Index>(xi, core.stages);
        for (Index alpha = 0; alpha < hi; ++alpha) {
            if (cert.matrix.bit(xi, alpha) != cert.config.t.bit(xi, alpha)) {
                if (bad == 0) {
                    first = "x[" + std::to_string(xi) + "][" + std::to_string(alpha) +
                            "] differs from its target row";
                }
                ++bad;
            }
        }
    }
    ctx.report("target-transcription", payload, bad ? CheckOutcome::Fail : CheckOutcome::Pass,
               bad ? first + " (" + std::to_string(bad) + " cells)" : "all transcribed cells agree");
}

void check_target_hit(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    std::string bad;
    std::size_t checked = 0;
    for (const auto& [stage, a] : cert.config.assignments) {
        if (!a.f_task || a.f_task->targets[0].empty()) continue;
        ++checked;
        if (cert.stage_psis[stage].eval(a.f_task->targets[0]) != 1) {
            bad = "stage " + std::to_string(stage) + ": first target not sent to 1";
            break;
        }
    }
    ctx.report("target-hit", matrix_payload(cert.matrix),
               bad.empty() ? CheckOutcome::Pass : CheckOutcome::Fail,
               bad.empty() ? std::to_string(checked) + " task stages checked" : bad);
}

void check_agreement_bound(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    std::string bad;
    std::size_t checked = 0;
    for (const auto& [stage, a] : cert.config.assignments) {
        if (!a.f_task) continue;
        ++checked;
        NonAccumulationReport r = non_accumulation_witness(
            cert.stage_psis, cert.config.assignments, cert.outcomes, *a.f_task, ctx.core.k);
        if (!r.matched || !r.verified) {
            bad = "stage " + std::to_string(stage) + ": agreement past bound " +
                  std::to_string(r.bound_n0);
            break;
        }
    }
    ctx.report("agreement-bound", matrix_payload(cert.matrix),
               bad.empty() ? CheckOutcome::Pass : CheckOutcome::Fail,
               bad.empty() ? std::to_string(checked) + " task stages verified" : bad);
}

void check_window_density(CheckContext& ctx, int budget) {
    const auto& cert = ctx.cert;
    const auto& core = ctx.core;
    std::string bad;
    std::size_t windows = 0;
    for (const auto& [beta, a] : cert.config.assignments) {
        if (!a.h_table) continue;
        const HTable& table = *a.h_table;
        for (Index gamma_end = beta + 1; gamma_end <= core.stages; ++gamma_end) {
            int width = static_cast<int>(gamma_end - beta);
            if (width * table.m() > budget) break;
            ++windows;
            DensityReport r =
                window_density_check(cert.stage_psis, table, beta, gamma_end, budget);
            if (!r.pass) {
                bad = "table at " + std::to_string(beta) + ", window up to " +
                      std::to_string(gamma_end) + ": " + std::to_string(r.missing.size()) +
                      " targets unrealized";
                break;
            }
        }
        if (!bad.empty()) break;
    }
    ctx.report("window-density", matrix_payload(cert.matrix) + std::to_string(budget),
               bad.empty() ? CheckOutcome::Pass : CheckOutcome::Fail,
               bad.empty() ? std::to_string(windows) + " windows fully realized" : bad);
}

void check_transfer(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    const auto& core = ctx.core;

    // Greedy pool of rows whose realized elements are independent; inside
    // the pool combo independence and element independence must coincide.
    EchelonState pool_state;
    std::vector<Index> pool;
    for (Index xi = 0; xi < cert.matrix.rows; ++xi) {
        FinVec support = bits_support(realize(cert.matrix, FinVec{xi}).bits);
        if (support.empty()) continue;
        if (!pool_state.try_insert(support, xi)) pool.push_back(xi);
    }

    if (pool.empty()) {
        ctx.report("independence-transfer", matrix_payload(cert.matrix),
                   CheckOutcome::Inconclusive, "no nonzero realized rows to sample from");
        return;
    }
    std::mt19937_64 rng(core.seed ^ 0x7472616eULL);
    std::vector<std::vector<FinVec>> families;
    for (int s = 0; s < core.family_samples; ++s) {
        std::size_t size = 1 + rng() % std::min<std::size_t>(6, std::max<std::size_t>(pool.size(), 1));
        std::vector<FinVec> family;
        for (std::size_t v = 0; v < size; ++v) {
            std::set<Index> combo;
            std::size_t len = 1 + rng() % 3;
            for (std::size_t e = 0; e < len; ++e) combo.insert(pool[rng() % pool.size()]);
            family.push_back(FinVec(std::vector<Index>(combo.begin(), combo.end())));
        }
        families.push_back(std::move(family));
        // Every third family gets a forced dependency appended.
        if (s % 3 == 2 && families.back().size() >= 2) {
            families.back().push_back(
                sym_diff(families.back()[0], families.back()[1]));
        }
    }

    std::vector<TransferVerdict> verdicts = independence_transfer_check(cert.matrix, families);
    std::size_t disagreements = 0;
    for (const TransferVerdict& v : verdicts) {
        if (!v.agree) ++disagreements;
    }
    std::string payload = matrix_payload(cert.matrix) + std::to_string(core.seed);
    ctx.report("independence-transfer", payload,
               disagreements ? CheckOutcome::Fail : CheckOutcome::Pass,
               disagreements
                   ? std::to_string(disagreements) + " of " + std::to_string(families.size()) +
                         " families disagree"
                   : std::to_string(families.size()) + " families agree (pool rank " +
                         std::to_string(pool.size()) + ")");
}

void check_open_family(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    const auto& core = ctx.core;
    int count = static_cast<int>(std::min<Index>(8, core.stages)) / (core.k + 1);
    if (count == 0) {
        ctx.report("open-family-guarantee", matrix_payload(cert.matrix), CheckOutcome::Inconclusive,
                   "too few columns for a single box tuple");
        return;
    }
    std::vector<Index> coords;
    for (int c = 0; c < count * (core.k + 1); ++c) coords.push_back(static_cast<Index>(c));
    auto tuples = build_open_family(core.k, coords, count);

    // Flatten and check every nonempty subset: the summed selection must
    // stay nonzero on the smallest selected coordinate, whatever the free
    // coordinates do.
    std::vector<const OpenBox*> boxes;
    for (const auto& tuple : tuples) {
        for (const OpenBox& b : tuple) boxes.push_back(&b);
    }
    std::string bad;
    for (std::size_t mask = 1; mask < (1u << boxes.size()); ++mask) {
        std::size_t lowest = 0;
        while (!(mask & (1u << lowest))) ++lowest;
        Index coord = coords[lowest];
        std::uint8_t parity = 0;
        bool determined = true;
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            if (!(mask & (1u << b))) continue;
            auto it = boxes[b]->pins.find(coord);
            if (it == boxes[b]->pins.end()) {
                determined = false;
                break;
            }
            parity ^= it->second;
        }
        if (!determined || parity != 1) {
            bad = "subset mask " + std::to_string(mask) + " can sum to zero";
            break;
        }
    }
    ctx.report("open-family-guarantee",
               std::to_string(core.k) + ":" + std::to_string(count),
               bad.empty() ? CheckOutcome::Pass : CheckOutcome::Fail,
               bad.empty() ? std::to_string((1u << boxes.size()) - 1) + " selections nonzero"
                           : bad);
}

void check_selection_independence(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    const auto& core = ctx.core;
    int count = static_cast<int>(std::min<Index>(8, core.stages)) / (core.k + 1);
    if (count == 0) {
        ctx.report("selection-independence", matrix_payload(cert.matrix),
                   CheckOutcome::Inconclusive, "too few columns for a single box tuple");
        return;
    }
    std::vector<Index> coords;
    for (int c = 0; c < count * (core.k + 1); ++c) coords.push_back(static_cast<Index>(c));
    auto tuples = build_open_family(core.k, coords, count);

    // Bounded deterministic search for a member of each box: combinations
    // of generators of size up to the configured limit.
    std::vector<std::vector<GroupElement>> selections;
    std::vector<std::string> missing;
    for (int n = 0; n < count; ++n) {
        std::vector<GroupElement> tuple;
        for (int i = 0; i <= core.k; ++i) {
            const OpenBox& box = tuples[n][i];
            std::optional<GroupElement> found;
            std::vector<Index> combo;
            std::function<void(Index, int)> search = [&](Index start, int depth) {
                if (found) return;
                if (!combo.empty()) {
                    GroupElement e = realize(cert.matrix, FinVec(combo));
                    if (box.admits(e.bits)) {
                        found = std::move(e);
                        return;
                    }
                }
                if (depth == core.combo_search_limit) return;
                for (Index xi = start; xi < cert.matrix.rows; ++xi) {
                    combo.push_back(xi);
                    search(xi + 1, depth + 1);
                    combo.pop_back();
                    if (found) return;
                }
            };
            search(0, 0);
            if (!found) {
                missing.push_back("box " + std::to_string(n) + "/" + std::to_string(i));
                break;
            }
            tuple.push_back(std::move(*found));
        }
        if (tuple.size() != static_cast<std::size_t>(core.k) + 1) break;
        selections.push_back(std::move(tuple));
    }

    std::string payload = matrix_payload(cert.matrix) + std::to_string(core.combo_search_limit);
    if (!missing.empty()) {
        ctx.report("selection-independence", payload, CheckOutcome::Inconclusive,
                   "no member found within the combo budget: " + missing.front());
        return;
    }
    SelectionVerdict v = selection_independence_check(
        cert.matrix, std::span<const std::vector<OpenBox>>(tuples.data(), selections.size()),
        selections);
    std::string detail;
    CheckOutcome outcome = CheckOutcome::Pass;
    if (v.box_violation) {
        outcome = CheckOutcome::Fail;
        detail = "selection " + std::to_string(v.violating_selection) + " violates its box";
    } else if (!v.independent) {
        outcome = CheckOutcome::Fail;
        detail = "selected elements are dependent";
    } else {
        detail = std::to_string(selections.size() * (core.k + 1)) + " selected elements independent";
    }
    ctx.report("selection-independence", payload, outcome, detail);
}

void check_property_p(CheckContext& ctx) {
    const auto& cert = ctx.cert;
    const auto& core = ctx.core;
    std::string bad;
    std::size_t windows = 0;
    const Index cols = core.stages;
    for (int w = 1; w <= core.pattern_width && bad.empty(); ++w) {
        // All windows of width w, unless that blows up; then contiguous only.
        double count = 1;
        for (int i = 0; i < w; ++i) count *= static_cast<double>(cols - i) / (i + 1);
        bool contiguous_only = count > 20000;
        std::vector<std::vector<Index>> chosen;
        if (contiguous_only) {
            for (Index start = 0; start + w <= cols; ++start) {
                std::vector<Index> window(w);
                for (int i = 0; i < w; ++i) window[i] = start + i;
                chosen.push_back(std::move(window));
            }
        } else {
            std::vector<Index> window(w);
            std::function<void(Index, int)> rec = [&](Index start, int depth) {
                if (depth == w) {
                    chosen.push_back(window);
                    return;
                }
                for (Index c = start; c + (w - depth) <= cols; ++c) {
                    window[depth] = c;
                    rec(c + 1, depth + 1);
                }
            };
            rec(0, 0);
        }
        for (const auto& window : chosen) {
            ++windows;
            PatternReport r = property_p_window_check(cert.matrix, window);
            if (!r.pass) {
                bad = "window {" ;
                for (Index c : window) bad += std::to_string(c) + ",";
                bad.back() = '}';
                bad += ": " + std::to_string(r.missing.size()) + " patterns missing";
                break;
            }
        }
    }
    ctx.report("row-pattern-completeness",
               matrix_payload(cert.matrix) + std::to_string(core.pattern_width),
               bad.empty() ? CheckOutcome::Pass : CheckOutcome::Fail,
               bad.empty() ? std::to_string(windows) + " windows pattern-complete" : bad);
}

}  // namespace

VerifySummary run_verify(Certificate& cert, int budget_width_override) {
    const DriverConfig& core = cert.config.core;
    if (cert.stage_psis.size() != core.stages || cert.matrix.rows != core.ground_size ||
        cert.matrix.cols != core.stages) {
        throw MalformedCertificateError("certificate does not match its config dimensions");
    }

    CheckContext ctx{cert, core, {}};
    check_column_consistency(ctx);
    check_base_and_diagonal(ctx);
    check_transcription(ctx);
    check_target_hit(ctx);
    check_agreement_bound(ctx);
    check_window_density(ctx, budget_width_override > 0 ? budget_width_override
                                                        : core.density_budget);
    check_transfer(ctx);
    check_open_family(ctx);
    check_selection_independence(ctx);
    check_property_p(ctx);

    cert.verdicts = std::move(ctx.verdicts);
    bool any_fail = false, any_inconclusive = false;
    for (const VerdictEntry& v : cert.verdicts) {
        any_fail |= v.outcome == CheckOutcome::Fail;
        any_inconclusive |= v.outcome == CheckOutcome::Inconclusive;
    }
    VerifySummary summary;
    if (any_fail) {
        cert.status = CertStatus::Fail;
        summary = {CertStatus::Fail, 1};
    } else if (any_inconclusive) {
        cert.status = CertStatus::Inconclusive;
        summary = {CertStatus::Inconclusive, 2};
    } else {
        cert.status = CertStatus::Pass;
        summary = {CertStatus::Pass, 0};
    }
    return summary;
}

// ---------------------------------------------------------------------------
// seeded config generation
// ---------------------------------------------------------------------------

RunConfig gen_config(std::uint64_t seed, int k, Index stages) {
    if (k < 1 || k > 3) throw ValidationError("gen_config: k must be in [1,3]");
    if (stages < 2 * static_cast<Index>(k) + 10) {
        throw ValidationError("gen_config: need at least 2k+10 stages");
    }

    RunConfig cfg;
    cfg.core.k = k;
    cfg.core.base = 4;
    cfg.core.stages = stages;
    cfg.core.ground_size = stages * (k + 1);
    cfg.core.repetition = 2;
    cfg.core.claim_budget = 128;
    cfg.core.pattern_width = 2;
    cfg.core.density_budget = 2;
    cfg.core.min_codimension = 2;
    cfg.core.combo_search_limit = 3;
    cfg.core.family_samples = 40;
    cfg.core.seed = seed;
    cfg.core.validate();

    std::mt19937_64 rng(seed ^ 0x67656e63ULL);

    // One steered table in the upper third, entries packed directly below
    // its stage so later task targets can stay clear of them. Sized so every
    // sigma keeps its repetitions even when the schedule pins all columns.
    const int ncols = std::max(1 << cfg.core.density_budget, cfg.core.repetition * 2);
    const Index late_family = 2 * static_cast<Index>(k + 1);
    Index beta_t = stages - 3;
    // Jitter the table stage when the late task still keeps target room.
    if (stages - 4 >= late_family + static_cast<Index>(ncols) + 1 && (rng() % 2) == 1) {
        beta_t = stages - 4;
    }
    const Index offset = beta_t - static_cast<Index>(ncols);
    {
        std::vector<int> columns;
        std::vector<std::vector<FinVec>> entries;
        int label0 = static_cast<int>(rng() % 3);
        for (int c = 0; c < ncols; ++c) {
            columns.push_back(label0 + c);
            entries.push_back({FinVec{offset + static_cast<Index>(c)}});
        }
        StageAssignment a;
        a.h_table = HTable::create(1, std::move(columns), std::move(entries), beta_t);
        cfg.assignments.emplace(beta_t, std::move(a));
    }

    // An early task stage before any table is scheduled, and a late one that
    // has to coexist with the steered table. Targets stay below `cap` so
    // their images never collide with transported table entries.
    auto make_task = [&](Index stage, Index family_size, Index cap) {
        FTask task;
        Index anchor = stage - 1;
        for (Index jv = 0; jv < family_size; ++jv) {
            task.vectors.push_back(FinVec{jv, anchor});
        }
        for (int i = 0; i <= k; ++i) {
            std::set<Index> support;
            std::size_t len = 1 + rng() % 2;
            for (std::size_t e = 0; e < len; ++e) {
                support.insert(family_size + static_cast<Index>(rng() % (cap - family_size)));
            }
            task.targets.push_back(FinVec(std::vector<Index>(support.begin(), support.end())));
        }
        return task;
    };
    {
        StageAssignment a;
        a.f_task = make_task(5, 3, 4);
        cfg.assignments.emplace(5, std::move(a));
    }
    {
        Index stage = stages - 1;
        StageAssignment a;
        a.f_task = make_task(stage, late_family, offset);
        cfg.assignments.emplace(stage, std::move(a));
    }

    cfg.t = make_pattern_complete_tmatrix(cfg.core);
    for (const auto& [stage, a] : cfg.assignments) validate_assignment(stage, a, cfg.core);
    return cfg;
}

}  // namespace gf2gen
