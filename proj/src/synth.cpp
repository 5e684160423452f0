#include "ledgerlift/synth.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "ledgerlift/cleaner.hpp"
#include "ledgerlift/csv.hpp"
#include "ledgerlift/digest.hpp"
#include "ledgerlift/ingest.hpp"
#include "ledgerlift/text.hpp"

namespace fs = std::filesystem;

namespace ledgerlift {

namespace {

constexpr std::array<int, 6> kCodeWidth = {4, 2, 3, 2, 2, 3};

constexpr std::array<std::string_view, 24> kNouns = {
    "Excise",      "Husbandry",  "Irrigation", "Roads",      "Bridges",    "Schools",
    "Hospitals",   "Forests",    "Fisheries",  "Housing",    "Pensions",   "Welfare",
    "Water",       "Supply",     "Sanitation", "Police",     "Courts",     "Elections",
    "Treasuries",  "Stationery", "Printing",   "Tourism",    "Sericulture", "Horticulture",
};
constexpr std::array<std::string_view, 12> kQualifiers = {
    "State",   "District", "Rural",    "Urban",   "Direction and", "Grants for",
    "Minor",   "Major",    "Special",  "General", "Assistance to", "Maintenance of",
};
constexpr std::array<std::string_view, 10> kObjects = {
    "Salaries",     "Wages",          "Travel Expenses", "Office Expenses", "Rents Rates and Taxes",
    "Grants in Aid", "Subsidies",     "Machinery and Equipment", "Motor Vehicles", "Other Charges",
};

struct Node {
    int depth = 1;
    std::string code;
    std::string description;
    FiscalAmountSet amounts;
    std::optional<Charge> charge;
    std::vector<Node> children;
};

class Generator {
public:
    explicit Generator(const CorpusSpec& spec) : spec_(spec), rng_(spec.seed) {}

    std::vector<Node> forest() {
        std::set<int> majors;
        std::uniform_int_distribution<int> major_code(2000, 5999);
        while (static_cast<int>(majors.size()) < spec_.major_heads) majors.insert(major_code(rng_));
        std::vector<Node> out;
        for (int code : majors) {
            Node n;
            n.depth = 1;
            n.code = std::to_string(code);
            n.description = pick(kQualifiers) + " " + pick(kNouns);
            fill(n, std::nullopt);
            out.push_back(std::move(n));
        }
        return out;
    }

private:
    template <std::size_t N>
    std::string pick(const std::array<std::string_view, N>& words) {
        std::uniform_int_distribution<std::size_t> d(0, N - 1);
        return std::string(words[d(rng_)]);
    }

    static std::string pad_code(int value, int width) {
        auto s = std::to_string(value);
        if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
        return s;
    }

    void fill(Node& node, std::optional<Charge> charge) {
        if (node.depth == 3) {
            std::bernoulli_distribution charged(0.1);
            charge = charged(rng_) ? Charge::Charged : Charge::Voted;
        }
        if (node.depth >= 3) node.charge = charge;
        if (node.depth == 6) {
            std::uniform_int_distribution<Amount> amount(1, 1'000'000);
            for (auto p : kAllPeriods) node.amounts[p] = amount(rng_) * spec_.unit.multiplier();
            return;
        }
        std::uniform_int_distribution<int> fanout(spec_.fanout_min, spec_.fanout_max);
        std::uniform_int_distribution<int> start(1, 9);
        std::uniform_int_distribution<int> step(1, 3);
        int n = fanout(rng_);
        int code = start(rng_);
        for (int i = 0; i < n; ++i) {
            Node child;
            child.depth = node.depth + 1;
            child.code = pad_code(code, kCodeWidth[static_cast<std::size_t>(child.depth - 1)]);
            code += step(rng_);
            child.description = child.depth == 6 ? pick(kObjects) : pick(kQualifiers) + " " + pick(kNouns);
            fill(child, charge);
            node.amounts += child.amounts;
            node.children.push_back(std::move(child));
        }
    }

    const CorpusSpec& spec_;
    std::mt19937_64 rng_;
};

struct StreamRow {
    Archetype archetype;
    ExtractedRow row;
};

void emit(const Node& node, Archetype archetype, Category category, std::vector<std::string>& path,
          std::vector<StreamRow>& out) {
    path.push_back(node.code);
    ExtractedRow row;
    row.code_path = path;
    row.amounts = node.amounts;
    row.category = category;
    row.charge = node.charge;
    if (node.depth == archetype_depth(archetype)) {
        row.kind = RowKind::Data;
        row.description = node.description;
        out.push_back({archetype, std::move(row)});
    } else {
        for (const auto& c : node.children) emit(c, archetype, category, path, out);
        row.kind = RowKind::Total;
        row.description = "Total " + node.code;
        out.push_back({archetype, std::move(row)});
    }
    path.pop_back();
}

TokenUsage default_page_usage(int lines) {
    return {3000 + 17 * lines, 1500 + 11 * lines, 20 + 40 * lines};
}

void split_target(const TokenUsage& target, std::vector<TokenUsage*> slots) {
    const auto n = static_cast<std::int64_t>(slots.size());
    auto share = [&](std::int64_t total, std::int64_t i) { return total / n + (i < total % n ? 1 : 0); };
    for (std::int64_t i = 0; i < n; ++i)
        *slots[static_cast<std::size_t>(i)] = {share(target.input_tokens, i), share(target.thought_tokens, i),
                                               share(target.output_tokens, i)};
}

}  // namespace

void validate_spec(const CorpusSpec& spec) {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, "corpus spec: " + what); };
    if (spec.major_heads < 1 || spec.major_heads > 4000) bad("major_heads must be in 1..4000");
    if (spec.fanout_min < 1) bad("fanout min must be >= 1");
    if (spec.fanout_max < spec.fanout_min) bad("fanout max below min");
    if (spec.fanout_max > 30) bad("fanout max must be <= 30");
    if (spec.pages < 1) bad("pages must be >= 1");
    if (spec.sample_pages < 1 || spec.sample_pages > spec.pages) bad("sample_pages out of range");
}

Corpus generate_corpus(const CorpusSpec& spec) {
    validate_spec(spec);
    Corpus corpus;
    corpus.spec = spec;
    auto forest = Generator(spec).forest();

    std::vector<StreamRow> stream;
    for (auto a : kAllArchetypes) {
        for (const auto& major : forest) {
            auto category = std::stoi(major.code) < 4000 ? Category::Revenue : Category::Capital;
            std::vector<std::string> path;
            emit(major, a, category, path, stream);
        }
    }

    const auto total = static_cast<std::int64_t>(stream.size());
    std::vector<std::vector<std::size_t>> by_page(static_cast<std::size_t>(spec.pages));
    for (std::int64_t i = 0; i < total; ++i) {
        auto page = static_cast<std::size_t>(i * spec.pages / total);
        by_page[page].push_back(static_cast<std::size_t>(i));
    }

    for (int p = 1; p <= spec.pages; ++p) {
        const auto& idx = by_page[static_cast<std::size_t>(p - 1)];
        std::vector<std::string> lines;
        if (idx.empty()) lines.emplace_back(kNoTables);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            auto& sr = stream[idx[k]];
            if (k == 0 || stream[idx[k - 1]].archetype != sr.archetype)
                lines.push_back(std::string(kSegmentHeader) + " " + std::string(archetype_name(sr.archetype)));
            sr.row.page = p;
            sr.row.line = static_cast<int>(lines.size()) + 1;
            lines.push_back(csv::join_line(render_row(sr.row, spec.unit, true)));
            bool last_on_page = k + 1 == idx.size();
            bool next_same = idx[k] + 1 < stream.size() && stream[idx[k] + 1].archetype == sr.archetype;
            if (last_on_page && next_same) lines.emplace_back(kContinuesMarker);
        }
        std::string text;
        for (const auto& l : lines) text += l + "\n";
        corpus.responses.push_back(std::move(text));
        corpus.page_usage.push_back(default_page_usage(static_cast<int>(lines.size())));

        std::string image = "LLSYNTH seed=" + std::to_string(spec.seed) + " page=" + std::to_string(p) + "\n";
        std::vector<std::byte> bytes(image.size());
        std::transform(image.begin(), image.end(), bytes.begin(), [](char c) { return std::byte(c); });
        corpus.images.push_back(std::move(bytes));
    }
    for (auto& sr : stream) corpus.tables[sr.archetype].push_back(std::move(sr.row));

    std::string meta(static_extraction_prompt());
    for (int s = 0; s < spec.sample_pages; ++s) {
        corpus.meta_responses.push_back(meta);
        corpus.meta_usage.push_back({5000, 2500, 1800});
    }

    if (spec.usage_target) {
        std::vector<TokenUsage*> slots;
        for (auto& u : corpus.meta_usage) slots.push_back(&u);
        for (auto& u : corpus.page_usage) slots.push_back(&u);
        split_target(*spec.usage_target, slots);
    }
    return corpus;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DigitPerturb: return "DigitPerturb";
        case ErrorKind::DescriptionSplit: return "DescriptionSplit";
        case ErrorKind::MissingCodeCell: return "MissingCodeCell";
        case ErrorKind::HeaderNoise: return "HeaderNoise";
    }
    return "DigitPerturb";
}

ErrorKind error_kind_from_name(std::string_view name) {
    for (auto k : {ErrorKind::DigitPerturb, ErrorKind::DescriptionSplit, ErrorKind::MissingCodeCell,
                   ErrorKind::HeaderNoise})
        if (text::iequals(name, to_string(k))) return k;
    throw Error(ErrorCode::InvalidArgument, "unknown error kind '" + std::string(name) + "'");
}

namespace {

struct Target {
    std::size_t page;  // 0-based
    std::size_t line;  // 0-based within the page's line list
};

bool is_row_line(std::string_view line) {
    auto t = text::trim(line);
    return !t.empty() && !t.starts_with("###") && t != kNoTables;
}

std::vector<std::size_t> split_points(std::string_view description) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < description.size(); ++i) {
        if (description[i] != ' ') continue;
        auto left = text::trim(description.substr(0, i));
        auto right = text::trim(description.substr(i + 1));
        if (!left.empty() && !right.empty() && !is_numeric_token(left) && !is_numeric_token(right) &&
            !text::istarts_with(right, "total"))
            out.push_back(i);
    }
    return out;
}

std::size_t path_length(const std::vector<std::string>& fields) {
    std::size_t n = 0;
    while (n < 6 && !text::trim(fields[kFirstLevelCol + n]).empty()) ++n;
    return n;
}

bool eligible(ErrorKind kind, const std::vector<std::string>& fields) {
    if (fields.size() != kColumnCount) return false;
    auto row_type = row_kind_from_name(fields[kRowTypeCol]);
    if (!row_type || *row_type == RowKind::Header) return false;
    switch (kind) {
        case ErrorKind::DigitPerturb:
            for (std::size_t c = kFirstAmountCol; c < kColumnCount; ++c)
                if (!text::trim(fields[c]).empty()) return true;
            return false;
        case ErrorKind::DescriptionSplit:
            return *row_type == RowKind::Data && !split_points(fields[kDescriptionCol]).empty();
        case ErrorKind::MissingCodeCell:
            return *row_type == RowKind::Total && path_length(fields) < 6;
        case ErrorKind::HeaderNoise:
            return true;
    }
    return false;
}

std::vector<std::string> header_noise_cells() {
    std::vector<std::string> cells(kColumnCount);
    for (std::size_t i = kFirstLevelCol; i < kColumnCount; ++i) {
        if (i == kCategoryCol || i == kChargeCol) continue;
        std::string name(kColumns[i]);
        std::replace(name.begin(), name.end(), '_', ' ');
        cells[i] = name;
    }
    return cells;
}

}  // namespace

Injection inject_errors(std::span<const std::string> responses, std::span<const ErrorKind> kinds, int count,
                        std::uint64_t seed) {
    if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative error count");
    if (count > 0 && kinds.empty()) throw Error(ErrorCode::InvalidArgument, "no error kinds given");

    std::vector<std::vector<std::string>> pages;
    for (const auto& r : responses) pages.push_back(text::split_lines(r));

    std::mt19937_64 rng(seed);
    std::map<ErrorKind, std::vector<Target>> pools;
    for (auto kind : kinds) {
        if (pools.count(kind)) continue;
        auto& pool = pools[kind];
        for (std::size_t p = 0; p < pages.size(); ++p)
            for (std::size_t l = 0; l < pages[p].size(); ++l)
                if (is_row_line(pages[p][l]) && eligible(kind, csv::split_line(pages[p][l])))
                    pool.push_back({p, l});
        std::shuffle(pool.begin(), pool.end(), rng);
    }

    struct Edit {
        ErrorKind kind;
        std::string original;
        std::string corrupted;
    };
    std::map<std::pair<std::size_t, std::size_t>, Edit> edits;
    for (int i = 0; i < count; ++i) {
        auto kind = kinds[static_cast<std::size_t>(i) % kinds.size()];
        auto& pool = pools[kind];
        while (!pool.empty() && edits.count({pool.back().page, pool.back().line})) pool.pop_back();
        if (pool.empty())
            throw Error(ErrorCode::InsufficientTargets,
                        "ran out of eligible rows for " + std::string(to_string(kind)) + " after " +
                            std::to_string(i) + " injections");
        auto t = pool.back();
        pool.pop_back();
        const auto& original = pages[t.page][t.line];
        auto fields = csv::split_line(original);
        Edit edit{kind, original, {}};
        switch (kind) {
            case ErrorKind::DigitPerturb: {
                std::vector<std::size_t> cols;
                for (std::size_t c = kFirstAmountCol; c < kColumnCount; ++c)
                    if (!text::trim(fields[c]).empty()) cols.push_back(c);
                auto col = cols[std::uniform_int_distribution<std::size_t>(0, cols.size() - 1)(rng)];
                Amount digit = std::uniform_int_distribution<int>(1, 9)(rng);
                int exponent = std::uniform_int_distribution<int>(0, 5)(rng);
                Amount delta = digit;
                for (int e = 0; e < exponent; ++e) delta *= 10;
                auto shown = parse_amount(fields[col], UnitContext{});
                fields[col] = render_amount(shown + delta, UnitContext{}, true);
                edit.corrupted = csv::join_line(fields);
                break;
            }
            case ErrorKind::DescriptionSplit: {
                auto points = split_points(fields[kDescriptionCol]);
                auto at = points[std::uniform_int_distribution<std::size_t>(0, points.size() - 1)(rng)];
                auto desc = fields[kDescriptionCol];
                fields[kDescriptionCol] = std::string(text::trim(std::string_view(desc).substr(0, at)));
                fields.insert(fields.begin() + kDescriptionCol + 1,
                              std::string(text::trim(std::string_view(desc).substr(at + 1))));
                edit.corrupted = csv::join_line(fields);
                break;
            }
            case ErrorKind::MissingCodeCell:
                fields.erase(fields.begin() + static_cast<long>(kFirstLevelCol + path_length(fields)));
                edit.corrupted = csv::join_line(fields);
                break;
            case ErrorKind::HeaderNoise: {
                auto header = header_noise_cells();
                header[kPageCol] = std::to_string(t.page + 1);
                edit.corrupted = csv::join_line(header);
                edit.original.clear();
                break;
            }
        }
        edits.emplace(std::make_pair(t.page, t.line), std::move(edit));
    }

    Injection out;
    for (std::size_t p = 0; p < pages.size(); ++p) {
        std::string text;
        int index = 0;
        for (std::size_t l = 0; l < pages[p].size(); ++l) {
            const auto& line = pages[p][l];
            auto it = edits.find({p, l});
            if (it != edits.end() && it->second.kind == ErrorKind::HeaderNoise) {
                ++index;
                text += it->second.corrupted + "\n";
                out.ledger.push_back({static_cast<int>(p) + 1, index, ErrorKind::HeaderNoise, "", it->second.corrupted});
            }
            ++index;
            if (it != edits.end() && it->second.kind != ErrorKind::HeaderNoise) {
                text += it->second.corrupted + "\n";
                out.ledger.push_back(
                    {static_cast<int>(p) + 1, index, it->second.kind, it->second.original, it->second.corrupted});
            } else {
                text += line + "\n";
            }
        }
        out.responses.push_back(std::move(text));
    }
    return out;
}

std::string render_ledger(std::span<const LedgerEntry> ledger) {
    std::string out = "page,line,kind,original,corrupted\n";
    for (const auto& e : ledger) {
        out += csv::join_line(std::vector<std::string>{std::to_string(e.page), std::to_string(e.line),
                                                       std::string(to_string(e.kind)), e.original, e.corrupted});
        out += "\n";
    }
    return out;
}

std::vector<LedgerEntry> parse_ledger(std::string_view csv_text) {
    auto lines = text::split_lines(csv_text);
    if (lines.empty() || lines.front() != "page,line,kind,original,corrupted")
        throw Error(ErrorCode::InvalidArgument, "ledger: unexpected header");
    std::vector<LedgerEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = csv::split_line(lines[i]);
        if (f.size() != 5) throw Error(ErrorCode::InvalidArgument, "ledger: line " + std::to_string(i + 1));
        out.push_back({std::stoi(f[0]), std::stoi(f[1]), error_kind_from_name(f[2]), f[3], f[4]});
    }
    return out;
}

void write_corpus(const Corpus& corpus, const fs::path& out, const Injection* injection) {
    for (const auto& [archetype, rows] : corpus.tables) write_table(table_path(out / "tables", archetype), rows);

    const auto& responses = injection ? injection->responses : corpus.responses;
    std::vector<PageImage> manifest;
    std::vector<FixtureEntry> index;
    fs::create_directories(out / "pages");
    fs::create_directories(out / "fixtures" / "responses");
    char name[32];
    for (std::size_t i = 0; i < responses.size(); ++i) {
        int page = static_cast<int>(i) + 1;
        std::snprintf(name, sizeof name, "page-%04d", page);
        auto image_path = out / "pages" / (std::string(name) + ".img");
        const auto& bytes = corpus.images[i];
        write_text(image_path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
        manifest.push_back({page, image_path, 300, Orientation::Portrait});

        auto digest = sha256_hex(bytes);
        auto response_file = "responses/" + std::string(name) + ".txt";
        write_text(out / "fixtures" / response_file, responses[i]);
        index.push_back({std::string(kTaskExtract), digest, response_file, corpus.page_usage[i]});
        if (i < corpus.meta_responses.size()) {
            auto meta_file = "responses/meta-" + std::string(name + 5) + ".txt";
            write_text(out / "fixtures" / meta_file, corpus.meta_responses[i]);
            index.insert(index.end() - 1, {std::string(kTaskMeta), digest, meta_file, corpus.meta_usage[i]});
        }
    }
    write_manifest(out / "pages" / "manifest.tsv", manifest);
    write_fixture_index(out / "fixtures", index);
    std::vector<LedgerEntry> none;
    write_text(out / "ledger.csv", render_ledger(injection ? std::span<const LedgerEntry>(injection->ledger)
                                                           : std::span<const LedgerEntry>(none)));
}

}  // namespace ledgerlift
