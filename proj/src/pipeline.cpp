#include "ledgerlift/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <future>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "ledgerlift/cleaner.hpp"
#include "ledgerlift/csv.hpp"
#include "ledgerlift/digest.hpp"
#include "ledgerlift/hierarchy.hpp"
#include "ledgerlift/live_backend.hpp"
#include "ledgerlift/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ledgerlift {

BackendKind backend_kind_from_name(std::string_view name) {
    if (text::iequals(name, "fixture")) return BackendKind::Fixture;
    if (text::iequals(name, "live")) return BackendKind::Live;
    throw Error(ErrorCode::InvalidConfig, "backend: expected fixture or live, got '" + std::string(name) + "'");
}

PromptMode prompt_mode_from_name(std::string_view name) {
    if (text::iequals(name, "auto")) return PromptMode::Auto;
    if (text::iequals(name, "static")) return PromptMode::Static;
    if (text::iequals(name, "file")) return PromptMode::File;
    throw Error(ErrorCode::InvalidConfig, "prompt: expected auto, static or file, got '" + std::string(name) + "'");
}

void validate_config(const PipelineConfig& c) {
    auto bad = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
    if (c.volumes.empty()) bad("no volumes configured");
    std::set<std::string> names;
    for (const auto& v : c.volumes) {
        if (v.name.empty()) bad("volume without a name");
        if (v.name.find_first_of("/\\") != std::string::npos || v.name == "." || v.name == ".." || v.name == "report")
            bad("volume name '" + v.name + "' is not usable as a directory name");
        if (!names.insert(v.name).second) bad("duplicate volume name '" + v.name + "'");
        if (v.pdf.empty() == v.manifest.empty()) bad("volume '" + v.name + "': give exactly one of pdf or manifest");
        const auto& src = v.pdf.empty() ? v.manifest : v.pdf;
        if (!fs::is_regular_file(src)) bad("volume '" + v.name + "': " + src.string() + " does not exist");
    }
    if (c.backend == BackendKind::Fixture) {
        if (c.fixtures.empty()) bad("fixture backend needs a fixtures directory");
        if (!fs::is_directory(c.fixtures)) bad("fixtures directory " + c.fixtures.string() + " does not exist");
        if (!fs::is_regular_file(c.fixtures / kFixtureIndexName))
            bad("fixtures directory " + c.fixtures.string() + " has no " + kFixtureIndexName);
    } else if (!std::getenv(kApiKeyEnv) || !*std::getenv(kApiKeyEnv)) {
        bad(std::string("live backend needs ") + kApiKeyEnv);
    }
    if (c.prompt_mode == PromptMode::File && !fs::is_regular_file(c.prompt_file))
        bad("prompt file " + c.prompt_file.string() + " does not exist");
    if (!c.profile.empty() && !fs::is_regular_file(c.profile))
        bad("profile " + c.profile.string() + " does not exist");
    if (c.tolerance < 0) bad("tolerance must be >= 0");
    if (c.context_rows < 1) bad("context_rows must be >= 1");
    if (c.sample_pages < 1) bad("sample_pages must be >= 1");
    if (c.dpi < 72) bad("dpi must be >= 72");
    if (c.retry.attempts < 1) bad("retry attempts must be >= 1");
}

fs::path volume_dir(const PipelineConfig& config, const VolumeInput& volume) { return config.out / volume.name; }

std::unique_ptr<BackendAdapter> make_backend(const PipelineConfig& c) {
    if (c.backend == BackendKind::Fixture) return std::make_unique<FixtureBackend>(c.fixtures);
    auto options = LiveBackendOptions::from_env();
    options.model = c.model;
    return std::make_unique<LiveBackend>(options);
}

// ---------------------------------------------------------------------------

namespace {

constexpr const char* kStamp = ".stamp";

std::string stage_key(std::initializer_list<std::string> parts) {
    std::string joined;
    for (const auto& p : parts) {
        joined += p;
        joined += '\x1f';
    }
    return sha256_hex(std::string_view(joined));
}

std::string upstream_key(const fs::path& volume_dir, const char* stage) {
    auto stamp = volume_dir / stage / kStamp;
    if (!fs::is_regular_file(stamp))
        throw Error(ErrorCode::MissingStageOutput, std::string(stage) + " has not run in " + volume_dir.string());
    return std::string(text::trim(read_text(stamp)));
}

bool fresh(const fs::path& dir, const std::string& key, std::initializer_list<const char*> outputs) {
    auto stamp = dir / kStamp;
    if (!fs::is_regular_file(stamp) || text::trim(read_text(stamp)) != key) return false;
    return std::all_of(outputs.begin(), outputs.end(), [&](const char* f) { return fs::exists(dir / f); });
}

void stamp(const fs::path& dir, const std::string& key) { write_text(dir / kStamp, key + "\n"); }

void say(const Collaborators& with, const std::string& msg) {
    if (with.log) with.log(msg);
}

// Runs `body` with errors prefixed by the stage name.
template <class F>
StageOutcome guarded(const char* stage, const fs::path& volume_dir, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        throw e.within(volume_dir.filename().string() + "/" + stage);
    } catch (const fs::filesystem_error& e) {
        throw Error(ErrorCode::IoError, volume_dir.filename().string() + "/" + stage + ": " + e.what());
    }
}

std::string profile_text(const PipelineConfig& c) {
    return c.profile.empty() ? std::string(default_document_structure()) : read_text(c.profile);
}

std::string usage_row(std::string_view task, int page, const TokenUsage& u) {
    return std::string(task) + "," + std::to_string(page) + "," + std::to_string(u.input_tokens) + "," +
           std::to_string(u.thought_tokens) + "," + std::to_string(u.output_tokens) + "\n";
}

}  // namespace

StageOutcome stage_pages(const PipelineConfig& c, const VolumeInput& v, const fs::path& vdir,
                         const Collaborators& with) {
    return guarded("pages", vdir, [&]() -> StageOutcome {
        auto dir = vdir / "pages";
        std::string key;
        if (!v.manifest.empty()) {
            auto pages = read_manifest(v.manifest);
            std::string digest = sha256_file(v.manifest);
            for (const auto& p : pages) digest += sha256_file(p.image_path);
            key = stage_key({"pages", "manifest", fs::absolute(v.manifest).string(), digest});
            if (fresh(dir, key, {kManifestName})) return {key, true};
            write_manifest(dir / kManifestName, pages);
        } else {
            key = stage_key({"pages", "pdf", sha256_file(v.pdf), std::to_string(c.dpi), c.rasterizer});
            if (fresh(dir, key, {kManifestName})) return {key, true};
            CommandRasterizer command(c.rasterizer);
            const Rasterizer& r = with.rasterizer ? *with.rasterizer : command;
            auto pages = rasterize(v.pdf, c.dpi, dir, r);
            say(with, v.name + ": rasterized " + std::to_string(pages.size()) + " pages");
        }
        stamp(dir, key);
        return {key, false};
    });
}

StageOutcome stage_extract(const PipelineConfig& c, const fs::path& vdir, const Collaborators& with) {
    return guarded("extract", vdir, [&]() -> StageOutcome {
        auto dir = vdir / "extract";
        auto up = upstream_key(vdir, "pages");
        std::string backend_id, prompt_id;
        if (with.backend) backend_id = "custom:" + with.backend->name();
        else if (c.backend == BackendKind::Fixture) backend_id = "fixture:" + sha256_tree(c.fixtures);
        else backend_id = "live:" + c.model;
        switch (c.prompt_mode) {
            case PromptMode::Static: prompt_id = "static:" + sha256_hex(static_extraction_prompt()); break;
            case PromptMode::File: prompt_id = "file:" + sha256_file(c.prompt_file); break;
            case PromptMode::Auto:
                prompt_id = "auto:" + sha256_hex(std::string_view(profile_text(c))) + ":" +
                            std::to_string(c.sample_pages);
                break;
        }
        auto key = stage_key({"extract", up, backend_id, prompt_id, std::to_string(c.context_rows)});
        if (fresh(dir, key, {"raw.jsonl", "prompt.txt", "usage.csv"})) return {key, true};

        auto pages = read_manifest(vdir / "pages" / kManifestName);
        std::unique_ptr<BackendAdapter> owned;
        BackendAdapter* backend = with.backend;
        if (!backend) {
            owned = make_backend(c);
            backend = owned.get();
        }

        std::string usage = "task,page,input_tokens,thought_tokens,output_tokens\n";
        std::string prompt, warnings;
        if (c.prompt_mode == PromptMode::Static) {
            prompt = static_extraction_prompt();
        } else if (c.prompt_mode == PromptMode::File) {
            prompt = read_text(c.prompt_file);
        } else {
            auto n = std::min(pages.size(), static_cast<std::size_t>(c.sample_pages));
            auto generated = generate_extraction_prompt(profile_text(c), kAllArchetypes,
                                                        std::span<const PageImage>(pages).first(n), *backend, c.retry);
            prompt = generated.text;
            usage += usage_row(kTaskMeta, 0, generated.usage);
            if (generated.fallback) {
                warnings += generated.warning + "\n";
                say(with, vdir.filename().string() + ": " + generated.warning);
            }
        }

        std::string quarantine;
        auto run = extract_document(pages, prompt, *backend, c.context_rows, c.retry, [&](const RawPageExtract& p) {
            say(with, vdir.filename().string() + ": extracted page " + std::to_string(p.page));
        });
        for (const auto& p : run.pages) {
            usage += usage_row(kTaskExtract, p.page, p.usage);
            quarantine += render_quarantine(p.quarantine);
        }
        write_raw_extracts(dir / "raw.jsonl", run.pages);
        write_text(dir / "prompt.txt", prompt);
        write_text(dir / "usage.csv", usage);
        write_text(dir / "quarantine.txt", quarantine);
        write_text(dir / "warnings.txt", warnings);
        stamp(dir, key);
        return {key, false};
    });
}

StageOutcome stage_clean(const PipelineConfig& c, const VolumeInput& v, const fs::path& vdir,
                         const Collaborators& with) {
    return guarded("clean", vdir, [&]() -> StageOutcome {
        auto dir = vdir / "clean";
        auto unit = v.unit.value_or(c.unit);
        auto key = stage_key({"clean", upstream_key(vdir, "extract"), std::string(to_string(unit.scale))});
        if (fresh(dir, key, {"repair_log.csv"})) return {key, true};

        auto raws = read_raw_extracts(vdir / "extract" / "raw.jsonl");
        auto result = clean_pages(raws, unit);
        for (auto a : kAllArchetypes) write_table(table_path(dir, a), result.rows_for(a));
        std::vector<RepairAction> log;
        for (const auto& r : result.log) log.push_back(r);
        write_text(dir / "repair_log.csv", render_repair_log(log));
        write_text(dir / "quarantine.txt", render_quarantine(result.quarantine));
        say(with, vdir.filename().string() + ": cleaned " + std::to_string(result.rows.size()) + " rows, " +
                      std::to_string(log.size()) + " repairs, " + std::to_string(result.quarantine.size()) +
                      " quarantined");
        stamp(dir, key);
        return {key, false};
    });
}

TableSet load_clean_tables(const fs::path& vdir) {
    TableSet tables;
    for (auto a : kAllArchetypes) {
        auto path = table_path(vdir / "clean", a);
        if (!fs::is_regular_file(path))
            throw Error(ErrorCode::MissingStageOutput, "clean table " + path.string() + " is missing");
        tables[a] = read_table(path, a);
    }
    return tables;
}

StageOutcome stage_build(const PipelineConfig& c, const fs::path& vdir, const Collaborators& with) {
    return guarded("build", vdir, [&]() -> StageOutcome {
        auto dir = vdir / "build";
        auto key = stage_key({"build", upstream_key(vdir, "clean"), c.sort_by_code ? "sorted" : "source"});
        if (fresh(dir, key, {"issues.csv"})) return {key, true};

        auto tables = load_clean_tables(vdir);
        std::string issues = "archetype,major_head,page,line,code,message\n";
        std::size_t trees = 0;
        for (const auto& [a, rows] : tables) {
            std::string dump;
            if (!rows.empty()) {
                for (auto& built : build_forest(rows, a)) {
                    if (c.sort_by_code) sort_children_by_code(built.tree.root);
                    dump += dump_tree(built.tree);
                    ++trees;
                    for (const auto& i : built.issues)
                        issues += csv::join_line(std::vector<std::string>{
                                      std::string(archetype_key(a)), built.tree.major_head,
                                      std::to_string(i.where.page), std::to_string(i.where.line),
                                      std::string(to_string(i.code)), i.message}) +
                                  "\n";
                }
            }
            write_text(dir / (std::string(archetype_key(a)) + ".tree.txt"), dump);
        }
        write_text(dir / "issues.csv", issues);
        say(with, vdir.filename().string() + ": built " + std::to_string(trees) + " trees");
        stamp(dir, key);
        return {key, false};
    });
}

StageOutcome stage_validate(const PipelineConfig& c, const fs::path& vdir, const Collaborators& with) {
    return guarded("validate", vdir, [&]() -> StageOutcome {
        auto dir = vdir / "validate";
        auto scope = c.scope == CheckScope::Core ? "core" : "all";
        auto key = stage_key({"validate", upstream_key(vdir, "clean"), std::to_string(c.tolerance), scope});
        if (fresh(dir, key, {"checks.jsonl", "summary.csv", "failures.txt"})) return {key, true};

        auto run = run_validation(load_clean_tables(vdir), {c.scope, c.tolerance});
        std::string lines;
        for (const auto& r : run.results) lines += to_json_line(r) + "\n";
        write_text(dir / "checks.jsonl", lines);
        write_text(dir / "failures.txt", failure_report_by_family(run.results));
        std::string summary = "validation_type,checks,passed,pass_rate\n";
        for (const auto& s : summarize(run.results))
            summary += csv::join_line(std::vector<std::string>{s.validation_type, std::to_string(s.checks),
                                                               std::to_string(s.passed), std::to_string(s.pass_rate)}) +
                       "\n";
        write_text(dir / "summary.csv", summary);
        std::string issues = "code,major_head,page,line,message\n";
        for (const auto& i : run.issues)
            issues += csv::join_line(std::vector<std::string>{std::string(to_string(i.code)), i.major_head,
                                                              std::to_string(i.where.page),
                                                              std::to_string(i.where.line), i.message}) +
                      "\n";
        write_text(dir / "issues.csv", issues);
        auto fails = std::count_if(run.results.begin(), run.results.end(),
                                   [](const CheckResult& r) { return r.status == Verdict::Fail; });
        say(with, vdir.filename().string() + ": " + std::to_string(run.results.size()) + " checks, " +
                      std::to_string(fails) + " FAIL");
        stamp(dir, key);
        return {key, false};
    });
}

namespace {
int manifest_pages(const fs::path& vdir) {
    auto path = vdir / "pages" / kManifestName;
    return fs::is_regular_file(path) ? static_cast<int>(read_manifest(path).size()) : 0;
}
}  // namespace

StageOutcome stage_teds(const PipelineConfig& c, const fs::path& vdir, const Collaborators& with) {
    return guarded("teds", vdir, [&]() -> StageOutcome {
        auto dir = vdir / "teds";
        auto key = stage_key({"teds", upstream_key(vdir, "clean"), c.sort_by_code ? "sorted" : "source"});
        if (fresh(dir, key, {"scores.csv", "accuracy.csv"})) return {key, true};

        TedsPlan plan;
        plan.sort_by_code = c.sort_by_code;
        plan.jobs = c.jobs;
        auto scores = score_archetype_pairs(load_clean_tables(vdir), plan);
        write_text(dir / "scores.csv", render_scores(scores));
        std::string accuracy = "file,pages,pairs,zero_pairs,accuracy\n";
        if (!scores.empty()) {
            std::vector<AccuracyRow> rows{accuracy_row(vdir.filename().string(), manifest_pages(vdir), scores)};
            accuracy = render_accuracy(rows);
        }
        write_text(dir / "accuracy.csv", accuracy);
        auto zero = std::count_if(scores.begin(), scores.end(), [](const StructureScore& s) { return s.identical(); });
        say(with, vdir.filename().string() + ": " + std::to_string(scores.size()) + " tree pairs, " +
                      std::to_string(zero) + " identical");
        stamp(dir, key);
        return {key, false};
    });
}

// ---------------------------------------------------------------------------

VolumeReport load_volume_report(const std::string& name, const fs::path& vdir) {
    VolumeReport out;
    out.name = name;
    auto need = [&](const fs::path& p) {
        if (!fs::is_regular_file(p)) throw Error(ErrorCode::MissingStageOutput, name + ": " + p.string() + " is missing");
        return read_text(p);
    };
    for (const auto& line : text::split_lines(need(vdir / "validate" / "checks.jsonl")))
        if (!text::trim(line).empty()) out.checks.push_back(check_from_json(line));
    out.scores = parse_scores(need(vdir / "teds" / "scores.csv"));
    auto usage = text::split_lines(need(vdir / "extract" / "usage.csv"));
    for (std::size_t i = 1; i < usage.size(); ++i) {
        auto f = csv::split_line(usage[i]);
        if (f.size() != 5) continue;
        out.usage += TokenUsage{std::stoll(f[2]), std::stoll(f[3]), std::stoll(f[4])};
    }
    out.pages = manifest_pages(vdir);
    return out;
}

namespace {

std::size_t display_width(std::string_view s) {
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

std::string table_text(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], display_width(r[i]));
        }
    std::string out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i)
            line += r[i] + std::string(width[i] + 2 - display_width(r[i]), ' ');
        out += std::string(text::trim(line)) + "\n";
    }
    return out;
}

std::string csv_rows(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (const auto& r : rows) out += csv::join_line(r) + "\n";
    return out;
}

}  // namespace

ReportOutcome write_report(std::span<const VolumeReport> volumes, const fs::path& report_dir) {
    std::vector<CheckResult> all_checks;
    std::vector<StructureScore> all_scores;
    TokenUsage all_usage;
    int all_pages = 0;
    for (const auto& v : volumes) {
        all_checks.insert(all_checks.end(), v.checks.begin(), v.checks.end());
        all_scores.insert(all_scores.end(), v.scores.begin(), v.scores.end());
        all_usage += v.usage;
        all_pages += v.pages;
    }
    if (all_checks.empty()) throw Error(ErrorCode::MissingStageOutput, "no validation checks were run");

    ReportOutcome outcome;
    outcome.checks = static_cast<std::int64_t>(all_checks.size());
    outcome.any_fail = std::any_of(all_checks.begin(), all_checks.end(),
                                   [](const CheckResult& r) { return r.status == Verdict::Fail; });

    json report = json::object();
    report["volumes"] = json::array();

    std::vector<std::vector<std::string>> validation{{"file", "validation_type", "checks", "passed", "pass_rate"}};
    std::vector<std::vector<std::string>> teds{{"file", "pages", "pairs", "zero_pairs", "accuracy"}};
    std::vector<std::vector<std::string>> tokens{{"file", "pages", "input_tokens", "thought_tokens", "output_tokens"}};
    std::string failures;

    auto add = [&](const std::string& file, int pages, std::span<const CheckResult> checks,
                   std::span<const StructureScore> scores, const TokenUsage& usage) {
        json entry{{"file", file}, {"pages", pages}};
        entry["validation"] = json::array();
        for (const auto& s : summarize(checks)) {
            if (s.checks == 0) continue;
            validation.push_back({file, s.validation_type, std::to_string(s.checks), std::to_string(s.passed),
                                  std::to_string(s.pass_rate)});
            entry["validation"].push_back({{"validation_type", s.validation_type},
                                           {"checks", s.checks},
                                           {"passed", s.passed},
                                           {"pass_rate", s.pass_rate}});
        }
        auto zero = std::count_if(scores.begin(), scores.end(), [](const StructureScore& s) { return s.identical(); });
        std::string accuracy = scores.empty() ? "-" : structural_accuracy(scores).str();
        teds.push_back({file, std::to_string(pages), std::to_string(scores.size()), std::to_string(zero), accuracy});
        entry["teds"] = {{"pairs", scores.size()}, {"zero_pairs", zero}, {"accuracy", accuracy}};
        tokens.push_back({file, std::to_string(pages), std::to_string(usage.input_tokens),
                          std::to_string(usage.thought_tokens), std::to_string(usage.output_tokens)});
        entry["tokens"] = {{"input_tokens", usage.input_tokens},
                           {"thought_tokens", usage.thought_tokens},
                           {"output_tokens", usage.output_tokens}};
        return entry;
    };

    for (const auto& v : volumes) {
        auto entry = add(v.name, v.pages, v.checks, v.scores, v.usage);
        auto block = failure_report_by_family(v.checks);
        entry["failures"] = std::count_if(v.checks.begin(), v.checks.end(),
                                          [](const CheckResult& r) { return r.status == Verdict::Fail; });
        report["volumes"].push_back(entry);
        if (!block.empty()) failures += "# " + v.name + "\n\n" + block + "\n";
    }
    report["all"] = add("All Volumes", all_pages, all_checks, all_scores, all_usage);
    report["exit_status"] = outcome.any_fail ? 2 : 0;

    write_text(report_dir / "validation_summary.csv", csv_rows(validation));
    write_text(report_dir / "teds_accuracy.csv", csv_rows(teds));
    write_text(report_dir / "token_usage.csv", csv_rows(tokens));
    write_text(report_dir / "failures.txt", failures);
    write_text(report_dir / "report.json", report.dump(2) + "\n");
    std::string human = "Validation\n\n" + table_text(validation) + "\nStructure (TEDS, 0 = identical)\n\n" +
                        table_text(teds) + "\nToken usage\n\n" + table_text(tokens);
    if (!failures.empty()) human += "\nFailures\n\n" + failures;
    write_text(report_dir / "report.txt", human);
    return outcome;
}

// ---------------------------------------------------------------------------

int run_all(const PipelineConfig& config, const Collaborators& with) {
    std::mutex log_mutex;
    Collaborators shared = with;
    shared.log = [&](const std::string& msg) {
        if (!with.log && !config.verbose) return;
        std::lock_guard lock(log_mutex);
        if (with.log) with.log(msg);
        else std::cerr << msg << "\n";
    };
    auto error = [&](const std::string& msg) {
        std::lock_guard lock(log_mutex);
        std::cerr << "ledgerlift: " << msg << "\n";
    };

    try {
        validate_config(config);
    } catch (const Error& e) {
        error(e.what());
        return 1;
    }

    auto run_volume = [&](const VolumeInput& v) -> std::optional<std::string> {
        auto dir = volume_dir(config, v);
        try {
            stage_pages(config, v, dir, shared);
            stage_extract(config, dir, shared);
            stage_clean(config, v, dir, shared);
            stage_build(config, dir, shared);
            stage_validate(config, dir, shared);
            stage_teds(config, dir, shared);
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
        return std::nullopt;
    };

    unsigned width = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
    // A caller-supplied backend is not assumed to be thread-safe.
    if (with.backend) width = 1;
    std::vector<std::optional<std::string>> errors(config.volumes.size());
    for (std::size_t start = 0; start < config.volumes.size(); start += width) {
        auto end = std::min(config.volumes.size(), start + width);
        std::vector<std::future<std::optional<std::string>>> batch;
        for (auto i = start; i < end; ++i)
            batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, run_volume,
                                       std::cref(config.volumes[i])));
        for (auto i = start; i < end; ++i) errors[i] = batch[i - start].get();
    }
    bool failed = false;
    for (const auto& e : errors)
        if (e) {
            error(*e);
            failed = true;
        }
    if (failed) return 1;

    try {
        std::vector<VolumeReport> reports;
        for (const auto& v : config.volumes) reports.push_back(load_volume_report(v.name, volume_dir(config, v)));
        auto outcome = write_report(reports, config.out / "report");
        shared.log("report: " + (config.out / "report").string());
        return outcome.any_fail ? 2 : 0;
    } catch (const std::exception& e) {
        error(std::string("report: ") + e.what());
        return 1;
    }
}

}  // namespace ledgerlift
