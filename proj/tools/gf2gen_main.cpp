#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gf2gen/certificate.hpp"
#include "gf2gen/echelon.hpp"
#include "gf2gen/errors.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInputError = 3;

const char* outcome_text(gf2gen::CheckOutcome o) {
    switch (o) {
        case gf2gen::CheckOutcome::Pass: return "pass";
        case gf2gen::CheckOutcome::Fail: return "FAIL";
        case gf2gen::CheckOutcome::Inconclusive: return "inconclusive";
    }
    return "?";
}

int cmd_build(const std::string& config_path, const std::string& out_path) {
    gf2gen::RunConfig cfg = gf2gen::load_config(config_path);
    gf2gen::Certificate cert = gf2gen::run_build(cfg);
    gf2gen::save_text(out_path, gf2gen::format_certificate(cert));
    std::cout << "built " << cert.matrix.rows << "x" << cert.matrix.cols
              << " generator matrix over " << (cert.config.core.stages - cert.config.core.base)
              << " constructed stages -> " << out_path << "\n";
    return kExitPass;
}

int cmd_verify(const std::string& cert_path, const std::string& out_path, int budget_width) {
    gf2gen::Certificate cert = gf2gen::load_certificate(cert_path);
    gf2gen::VerifySummary summary = gf2gen::run_verify(cert, budget_width);
    for (const gf2gen::VerdictEntry& v : cert.verdicts) {
        std::cout << outcome_text(v.outcome) << "  " << v.check << ": " << v.witnesses << "\n";
    }
    std::cout << "overall: "
              << (summary.status == gf2gen::CertStatus::Pass
                      ? "pass"
                      : summary.status == gf2gen::CertStatus::Fail ? "fail" : "inconclusive")
              << "\n";
    if (!out_path.empty()) {
        gf2gen::save_text(out_path, gf2gen::format_certificate(cert));
    }
    return summary.exit_code;
}

int cmd_oracle_independence(const std::string& vectors_path) {
    std::ifstream in(vectors_path);
    if (!in) throw gf2gen::ValidationError("cannot open vector file: " + vectors_path);
    std::vector<gf2gen::FinVec> family;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        family.push_back(gf2gen::parse_finvec(line == "{}" ? "" : line));
    }
    gf2gen::IndependenceVerdict verdict = gf2gen::is_independent(family);
    if (verdict.independent) {
        std::cout << "independent (" << family.size() << " vectors, rank "
                  << gf2gen::rank(family) << ")\n";
    } else {
        std::cout << "dependent; zero-sum positions:";
        for (std::size_t p : verdict.witness) std::cout << " " << p;
        std::cout << "\n";
    }
    return kExitPass;
}

int cmd_gen_config(std::uint64_t seed, int k, unsigned stages, const std::string& out_path) {
    gf2gen::RunConfig cfg = gf2gen::gen_config(seed, k, stages);
    gf2gen::save_text(out_path, gf2gen::format_config(cfg));
    std::cout << "wrote config (k=" << k << ", stages=" << stages << ", seed=" << seed
              << ") -> " << out_path << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"staged GF(2) generator construction with certificate verification"};
    app.require_subcommand(1);

    std::string config_path, out_path, cert_path, vectors_path;
    int budget_width = 0;
    std::uint64_t seed = 1;
    int k = 1;
    unsigned stages = 12;

    auto* build = app.add_subcommand("build", "run the construction and emit a certificate");
    build->add_option("--config", config_path, "run config (json)")->required();
    build->add_option("--out", out_path, "certificate output path")->required();

    auto* verify = app.add_subcommand("verify", "run the verifier suite over a certificate");
    verify->add_option("--cert", cert_path, "certificate path")->required();
    verify->add_option("--budget-width", budget_width,
                       "override the density enumeration budget");
    verify->add_option("--out", out_path, "write the verified certificate here");

    auto* oracle = app.add_subcommand("oracle", "standalone linear-algebra oracles");
    auto* indep = oracle->add_subcommand("independence", "check a vector family from a file");
    indep->add_option("--vectors", vectors_path, "one vector per line, e.g. 0,3,7")->required();

    auto* gen = app.add_subcommand("gen-config", "emit a seeded, valid run config");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--k", k, "power split parameter");
    gen->add_option("--stages", stages, "number of stages");
    gen->add_option("--out", out_path, "config output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) return cmd_build(config_path, out_path);
        if (*verify) return cmd_verify(cert_path, out_path, budget_width);
        if (*indep) return cmd_oracle_independence(vectors_path);
        if (*gen) return cmd_gen_config(seed, k, stages, out_path);
    } catch (const gf2gen::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
