#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gf2gen/driver.hpp"

namespace gf2gen {

/// Full run input: driver parameters, target bits and stage assignments.
struct RunConfig {
    DriverConfig core;
    TMatrix t;
    AssignmentMap assignments;
};

enum class CheckOutcome { Pass, Fail, Inconclusive };

struct VerdictEntry {
    std::string check;
    std::string digest;        // over the check's inputs
    CheckOutcome outcome = CheckOutcome::Pass;
    std::string witnesses;     // short human-readable summary
};

enum class CertStatus { Unverified, Pass, Fail, Inconclusive };

/// Self-contained record of a run: config echo, per-stage functionals and
/// traces, the generator matrix and (after verification) the verdicts.
struct Certificate {
    int format_version = 1;
    RunConfig config;
    std::vector<Functional> stage_psis;                  // one per stage
    std::vector<std::optional<StageOutcome>> outcomes;   // per stage, none below base
    GeneratorMatrix matrix;
    std::vector<VerdictEntry> verdicts;
    CertStatus status = CertStatus::Unverified;
};

// --- files ----------------------------------------------------------------

/// Parse and fully validate a run config. Throws ValidationError with the
/// offending field path.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
std::string format_config(const RunConfig& cfg);

Certificate parse_certificate(const std::string& text);
Certificate load_certificate(const std::string& path);
std::string format_certificate(const Certificate& cert);
void save_text(const std::string& path, const std::string& text);

// --- orchestration ---------------------------------------------------------

/// Deterministic: identical configs yield byte-identical certificates.
Certificate run_build(const RunConfig& cfg);

struct VerifySummary {
    CertStatus status = CertStatus::Unverified;
    int exit_code = 0;  // 0 pass, 1 failed check, 2 inconclusive only
};

/// Execute the verifier suite within the configured budgets and fill the
/// certificate's verdict list. budget_width_override, when positive,
/// replaces the config's density budget.
VerifySummary run_verify(Certificate& cert, int budget_width_override = 0);

/// Deterministic seeded run config, valid by construction.
RunConfig gen_config(std::uint64_t seed, int k, Index stages);

/// FNV-1a 64 digest, hex encoded; used to tie verdicts to their inputs.
std::string digest64(const std::string& payload);

}  // namespace gf2gen
