#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "ledgerlift/cleaner.hpp"
#include "ledgerlift/digest.hpp"
#include "ledgerlift/pipeline.hpp"
#include "ledgerlift/synth.hpp"
#include "ledgerlift/text.hpp"

namespace fs = std::filesystem;
using namespace ledgerlift;

namespace {

struct Options {
    std::string out = "ledgerlift-out";
    bool verbose = false;
    std::string backend = "fixture";
    std::string fixtures;
    std::string prompt = "auto";
    std::string profile;
    std::size_t context_rows = kDefaultContextRows;
    int sample_pages = 2;
    std::string unit = "unit";
    Amount tolerance = 0;
    std::string scope = "all";
    bool sort_by_code = false;
    int dpi = kDefaultDpi;
    std::string rasterizer = CommandRasterizer::kDefaultCommand;
    int retries = 3;
    int retry_delay_ms = 1000;
    std::string model = "gemini-2.5-pro";
    unsigned jobs = 0;
    std::string pdf;
    std::string manifest;
    std::string name;
    std::vector<std::string> volumes;  // name:pdf|manifest:path[:unit]
};

VolumeInput parse_volume(const std::string& spec) {
    auto first = spec.find(':');
    auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
    if (second == std::string::npos)
        throw Error(ErrorCode::InvalidConfig, "volume '" + spec + "': expected name:pdf|manifest:path[:unit]");
    VolumeInput v;
    v.name = spec.substr(0, first);
    auto kind = spec.substr(first + 1, second - first - 1);
    auto rest = spec.substr(second + 1);
    auto last = rest.rfind(':');
    if (last != std::string::npos) {
        try {
            v.unit = UnitContext{unit_scale_from_name(rest.substr(last + 1))};
            rest = rest.substr(0, last);
        } catch (const Error&) {
        }
    }
    if (kind == "pdf") v.pdf = rest;
    else if (kind == "manifest") v.manifest = rest;
    else throw Error(ErrorCode::InvalidConfig, "volume '" + spec + "': kind must be pdf or manifest");
    return v;
}

PipelineConfig to_config(const Options& o) {
    PipelineConfig c;
    c.out = o.out;
    c.verbose = o.verbose;
    c.backend = backend_kind_from_name(o.backend);
    c.fixtures = o.fixtures;
    if (text::iequals(o.prompt, "auto") || text::iequals(o.prompt, "static")) {
        c.prompt_mode = prompt_mode_from_name(o.prompt);
    } else {
        c.prompt_mode = PromptMode::File;
        c.prompt_file = o.prompt;
    }
    c.profile = o.profile;
    c.context_rows = o.context_rows;
    c.sample_pages = o.sample_pages;
    c.unit = UnitContext{unit_scale_from_name(o.unit)};
    c.tolerance = o.tolerance;
    c.scope = check_scope_from_name(o.scope);
    c.sort_by_code = o.sort_by_code;
    c.dpi = o.dpi;
    c.rasterizer = o.rasterizer;
    c.retry = {o.retries, std::chrono::milliseconds(o.retry_delay_ms)};
    c.model = o.model;
    c.jobs = o.jobs;
    for (const auto& v : o.volumes) c.volumes.push_back(parse_volume(v));
    if (!o.pdf.empty() || !o.manifest.empty()) {
        VolumeInput v;
        v.pdf = o.pdf;
        v.manifest = o.manifest;
        v.name = !o.name.empty() ? o.name : fs::path(o.pdf.empty() ? o.manifest : o.pdf).stem().string();
        if (!o.manifest.empty() && o.name.empty()) v.name = fs::path(o.manifest).parent_path().filename().string();
        if (v.name.empty()) v.name = "volume";
        c.volumes.push_back(v);
    }
    return c;
}

// The single-stage subcommands operate on one volume directory (--out).
VolumeInput single_volume(const PipelineConfig& c) {
    if (c.volumes.size() > 1) throw Error(ErrorCode::InvalidConfig, "stage subcommands take one volume");
    return c.volumes.empty() ? VolumeInput{} : c.volumes.front();
}

int stage_exit_for_validation(const fs::path& dir) {
    auto checks = text::split_lines(read_text(dir / "validate" / "checks.jsonl"));
    for (const auto& line : checks)
        if (!text::trim(line).empty() && check_from_json(line).status == Verdict::Fail) return 2;
    return 0;
}

struct SynthOptions {
    std::uint64_t seed = 7;
    int majors = 3;
    int fanout_min = 2;
    int fanout_max = 3;
    int pages = 200;
    std::string unit = "lakh";
    int sample_pages = 2;
    std::vector<std::string> inject;  // Kind:count
    std::uint64_t error_seed = 1;
    std::vector<std::int64_t> usage_target;
};

int run_synth(const SynthOptions& s, const fs::path& out) {
    CorpusSpec spec;
    spec.seed = s.seed;
    spec.major_heads = s.majors;
    spec.fanout_min = s.fanout_min;
    spec.fanout_max = s.fanout_max;
    spec.pages = s.pages;
    spec.unit = UnitContext{unit_scale_from_name(s.unit)};
    spec.sample_pages = s.sample_pages;
    if (!s.usage_target.empty()) {
        if (s.usage_target.size() != 3) throw Error(ErrorCode::InvalidArgument, "--usage-target takes three numbers");
        spec.usage_target = TokenUsage{s.usage_target[0], s.usage_target[1], s.usage_target[2]};
    }
    auto corpus = generate_corpus(spec);

    std::vector<ErrorKind> kinds;
    int count = 0;
    for (const auto& item : s.inject) {
        auto colon = item.find(':');
        auto kind = error_kind_from_name(item.substr(0, colon));
        int n = colon == std::string::npos ? 1 : std::stoi(item.substr(colon + 1));
        for (int i = 0; i < n; ++i) kinds.push_back(kind);
        count += n;
    }
    std::optional<Injection> injection;
    if (count > 0) injection = inject_errors(corpus.responses, kinds, count, s.error_seed);
    write_corpus(corpus, out, injection ? &*injection : nullptr);

    auto abs = fs::absolute(out);
    std::string ini = "# ledgerlift all --config " + (abs / "ledgerlift.ini").string() + "\n";
    ini += "manifest = \"" + (abs / "pages" / kManifestName).string() + "\"\n";
    ini += "name = \"" + abs.filename().string() + "\"\n";
    ini += "fixtures = \"" + (abs / "fixtures").string() + "\"\n";
    ini += "unit = \"" + std::string(to_string(spec.unit.scale)) + "\"\n";
    write_text(out / "ledgerlift.ini", ini);
    std::cout << "wrote " << corpus.responses.size() << " pages, "
              << (injection ? injection->ledger.size() : 0) << " injected errors to " << out.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ledgerlift: hierarchical fiscal table extraction and validation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Key = value config file; command-line flags win");

    Options o;
    app.add_option("--out", o.out, "Output directory (a volume directory for single stages)");
    app.add_flag("-v,--verbose", o.verbose, "Progress messages on stderr");
    app.add_option("--backend", o.backend, "fixture or live")->check(CLI::IsMember({"fixture", "live"}));
    app.add_option("--fixtures", o.fixtures, "Fixture directory with index.tsv");
    app.add_option("--prompt", o.prompt, "auto, static, or a prompt file");
    app.add_option("--profile", o.profile, "Document structure text for prompt generation");
    app.add_option("--context-rows", o.context_rows, "Rows carried to the next page");
    app.add_option("--sample-pages", o.sample_pages, "Pages shown while generating the prompt");
    app.add_option("--unit", o.unit, "unit, thousand, lakh or crore");
    app.add_option("--tolerance", o.tolerance, "Allowed absolute difference per column");
    app.add_option("--scope", o.scope, "core or all")->check(CLI::IsMember({"core", "all"}));
    app.add_flag("--sort-by-code", o.sort_by_code, "Order siblings by code before tree comparison");
    app.add_option("--dpi", o.dpi, "Rasterization resolution");
    app.add_option("--rasterizer", o.rasterizer, "Rasterizer command template");
    app.add_option("--retries", o.retries, "Backend attempts per request");
    app.add_option("--retry-delay-ms", o.retry_delay_ms, "Initial backoff");
    app.add_option("--model", o.model, "Live backend model");
    app.add_option("--jobs", o.jobs, "Volumes processed in parallel (0: all cores)");
    app.add_option("--pdf", o.pdf, "Source PDF of a single volume");
    app.add_option("--manifest", o.manifest, "Page manifest of a single volume");
    app.add_option("--name", o.name, "Volume name");
    app.add_option("--volume", o.volumes, "name:pdf|manifest:path[:unit], repeatable");

    auto* rasterize_cmd = app.add_subcommand("rasterize", "Render pages and write pages/manifest.tsv");
    auto* extract_cmd = app.add_subcommand("extract", "Page-by-page extraction through the backend");
    auto* clean_cmd = app.add_subcommand("clean", "Classify, realign and type raw rows");
    auto* build_cmd = app.add_subcommand("build", "Build per-Major-Head trees");
    auto* validate_cmd = app.add_subcommand("validate", "Summation checks and failure report");
    auto* teds_cmd = app.add_subcommand("teds", "Tree edit distance across archetype pairs");
    auto* report_cmd = app.add_subcommand("report", "Summary tables over volume directories under --out");
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus with fixtures");
    auto* all_cmd = app.add_subcommand("all", "Every stage for every volume, then the report");

    std::vector<std::string> report_volumes;
    report_cmd->add_option("volumes", report_volumes, "Volume directory names (default: all under --out)");

    SynthOptions s;
    synth_cmd->add_option("--seed", s.seed);
    synth_cmd->add_option("--majors", s.majors);
    synth_cmd->add_option("--fanout-min", s.fanout_min);
    synth_cmd->add_option("--fanout-max", s.fanout_max);
    synth_cmd->add_option("--pages", s.pages);
    synth_cmd->add_option("--synth-unit", s.unit, "Unit the amounts are printed in");
    synth_cmd->add_option("--synth-sample-pages", s.sample_pages, "Pages answered by meta fixtures");
    synth_cmd->add_option("--inject", s.inject, "Kind:count, repeatable");
    synth_cmd->add_option("--error-seed", s.error_seed);
    synth_cmd->add_option("--usage-target", s.usage_target, "input thought output totals")->expected(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto config = to_config(o);
        Collaborators with;
        if (o.verbose) with.log = [](const std::string& m) { std::cerr << m << "\n"; };
        fs::path dir = config.out;

        if (*all_cmd) return run_all(config, with);
        if (*synth_cmd) return run_synth(s, dir);

        if (*report_cmd) {
            std::vector<VolumeReport> reports;
            if (report_volumes.empty()) {
                std::vector<std::string> names;
                if (fs::is_directory(dir))
                    for (const auto& e : fs::directory_iterator(dir))
                        if (fs::is_directory(e.path() / "validate")) names.push_back(e.path().filename().string());
                std::sort(names.begin(), names.end());
                report_volumes = names;
            }
            for (const auto& n : report_volumes) reports.push_back(load_volume_report(n, dir / n));
            auto outcome = write_report(reports, dir / "report");
            return outcome.any_fail ? 2 : 0;
        }

        auto volume = single_volume(config);
        if (*rasterize_cmd) {
            if (volume.pdf.empty() && volume.manifest.empty())
                throw Error(ErrorCode::InvalidConfig, "rasterize needs --pdf or --manifest");
            stage_pages(config, volume, dir, with);
        } else if (*extract_cmd) {
            if (config.backend == BackendKind::Fixture &&
                (config.fixtures.empty() || !fs::is_directory(config.fixtures)))
                throw Error(ErrorCode::InvalidConfig, "fixtures directory '" + config.fixtures.string() + "' does not exist");
            stage_extract(config, dir, with);
        } else if (*clean_cmd) {
            stage_clean(config, volume, dir, with);
        } else if (*build_cmd) {
            stage_build(config, dir, with);
        } else if (*validate_cmd) {
            stage_validate(config, dir, with);
            std::cout << read_text(dir / "validate" / "summary.csv");
            return stage_exit_for_validation(dir);
        } else if (*teds_cmd) {
            stage_teds(config, dir, with);
            std::cout << read_text(dir / "teds" / "accuracy.csv");
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "ledgerlift: " << e.what() << "\n";
        return 1;
    }
}
