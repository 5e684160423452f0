#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ledgerlift/extraction.hpp"
#include "ledgerlift/ingest.hpp"
#include "ledgerlift/teds.hpp"
#include "ledgerlift/validation.hpp"

namespace ledgerlift {

struct VolumeInput {
    std::string name;
    std::filesystem::path pdf;       // one of pdf / manifest
    std::filesystem::path manifest;
    std::optional<UnitContext> unit;  // overrides PipelineConfig::unit
};

enum class BackendKind { Fixture, Live };
enum class PromptMode { Auto, Static, File };

BackendKind backend_kind_from_name(std::string_view name);
PromptMode prompt_mode_from_name(std::string_view name);

struct PipelineConfig {
    std::vector<VolumeInput> volumes;
    BackendKind backend = BackendKind::Fixture;
    std::filesystem::path fixtures;
    PromptMode prompt_mode = PromptMode::Auto;
    std::filesystem::path prompt_file;
    std::filesystem::path profile;  // document structure text; built-in when empty
    std::size_t context_rows = kDefaultContextRows;
    int sample_pages = 2;
    UnitContext unit{};
    Amount tolerance = 0;
    CheckScope scope = CheckScope::All;
    bool sort_by_code = false;
    int dpi = 300;
    std::string rasterizer = std::string(CommandRasterizer::kDefaultCommand);
    RetryPolicy retry{};
    std::string model = "gemini-2.5-pro";
    std::filesystem::path out = "ledgerlift-out";
    unsigned jobs = 0;
    bool verbose = false;
};

// Throws InvalidConfig naming the offending field.
void validate_config(const PipelineConfig& config);

using Logger = std::function<void(const std::string&)>;

struct StageOutcome {
    std::string key;
    bool cached = false;
};

// Optional replacements for the external collaborators.
struct Collaborators {
    Rasterizer* rasterizer = nullptr;
    BackendAdapter* backend = nullptr;
    Logger log;
};

// Each stage reads its inputs from `volume_dir`, writes to its own
// subdirectory, and records a key over its parameters and the upstream key in
// `<stage>/.stamp`. An unchanged key with outputs in place is a no-op.
StageOutcome stage_pages(const PipelineConfig& c, const VolumeInput& v, const std::filesystem::path& volume_dir,
                         const Collaborators& with = {});
StageOutcome stage_extract(const PipelineConfig& c, const std::filesystem::path& volume_dir,
                           const Collaborators& with = {});
StageOutcome stage_clean(const PipelineConfig& c, const VolumeInput& v, const std::filesystem::path& volume_dir,
                         const Collaborators& with = {});
StageOutcome stage_build(const PipelineConfig& c, const std::filesystem::path& volume_dir,
                         const Collaborators& with = {});
StageOutcome stage_validate(const PipelineConfig& c, const std::filesystem::path& volume_dir,
                            const Collaborators& with = {});
StageOutcome stage_teds(const PipelineConfig& c, const std::filesystem::path& volume_dir,
                        const Collaborators& with = {});

std::unique_ptr<BackendAdapter> make_backend(const PipelineConfig& c);

// Loads the cleaned archetype tables of a volume.
TableSet load_clean_tables(const std::filesystem::path& volume_dir);

struct VolumeReport {
    std::string name;
    int pages = 0;
    std::vector<CheckResult> checks;
    std::vector<StructureScore> scores;
    TokenUsage usage;
};

VolumeReport load_volume_report(const std::string& name, const std::filesystem::path& volume_dir);

struct ReportOutcome {
    bool any_fail = false;
    std::int64_t checks = 0;
};

// validation_summary.csv, teds_accuracy.csv, token_usage.csv, failures.txt,
// report.txt and report.json under `report_dir`. Throws MissingStageOutput
// when a volume lacks validation or teds output, or no checks ran at all.
ReportOutcome write_report(std::span<const VolumeReport> volumes, const std::filesystem::path& report_dir);

// Every stage for every volume, then the report. Returns the exit status:
// 0 all checks pass, 2 any FAIL, 1 processing error.
int run_all(const PipelineConfig& config, const Collaborators& with = {});

// Volume directory used by run_all.
std::filesystem::path volume_dir(const PipelineConfig& config, const VolumeInput& volume);

}  // namespace ledgerlift
