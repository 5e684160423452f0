#include "ledgerlift/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ledgerlift/digest.hpp"
#include "ledgerlift/error.hpp"
#include "ledgerlift/text.hpp"

namespace fs = std::filesystem;

namespace ledgerlift {

std::string_view to_string(Orientation o) {
    return o == Orientation::Landscape ? "Landscape" : "Portrait";
}

namespace {

int be16(const unsigned char* p) { return (p[0] << 8) | p[1]; }
int be32(const unsigned char* p) {
    return static_cast<int>((static_cast<unsigned>(p[0]) << 24) | (p[1] << 16) | (p[2] << 8) | p[3]);
}

std::optional<ImageSize> jpeg_size(const std::vector<unsigned char>& b) {
    std::size_t i = 2;
    while (i + 9 < b.size()) {
        if (b[i] != 0xFF) return std::nullopt;
        unsigned char marker = b[i + 1];
        if (marker == 0xFF) {
            ++i;
            continue;
        }
        if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) {
            i += 2;
            continue;
        }
        int len = be16(&b[i + 2]);
        bool sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 &&
                   marker != 0xCC;
        if (sof) return ImageSize{be16(&b[i + 7]), be16(&b[i + 5])};
        i += 2 + static_cast<std::size_t>(len);
    }
    return std::nullopt;
}

std::optional<ImageSize> pnm_size(const std::vector<unsigned char>& b) {
    std::string head(b.begin(), b.begin() + static_cast<long>(std::min<std::size_t>(b.size(), 512)));
    std::istringstream in(head);
    std::string magic;
    in >> magic;
    std::array<int, 2> dims{};
    for (int& d : dims) {
        in >> std::ws;
        while (in.peek() == '#') {
            std::string skip;
            std::getline(in, skip);
            in >> std::ws;
        }
        if (!(in >> d)) return std::nullopt;
    }
    return ImageSize{dims[0], dims[1]};
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out.push_back(c);
    }
    return out + "'";
}

void replace_all(std::string& s, std::string_view key, const std::string& value) {
    for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size()))
        s.replace(pos, key.size(), value);
}

std::optional<int> page_number_from(const fs::path& file, const std::string& prefix) {
    auto stem = file.stem().string();
    if (stem.rfind(prefix + "-", 0) != 0) return std::nullopt;
    auto digits = stem.substr(prefix.size() + 1);
    int n = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
    return n;
}

}  // namespace

std::optional<ImageSize> read_image_size(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<unsigned char> b(64 * 1024);
    in.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(b.size()));
    b.resize(static_cast<std::size_t>(in.gcount()));
    if (b.size() >= 24 && b[0] == 0x89 && b[1] == 'P' && b[2] == 'N' && b[3] == 'G')
        return ImageSize{be32(&b[16]), be32(&b[20])};
    if (b.size() >= 4 && b[0] == 0xFF && b[1] == 0xD8) return jpeg_size(b);
    if (b.size() >= 2 && b[0] == 'P' && b[1] >= '1' && b[1] <= '6') return pnm_size(b);
    return std::nullopt;
}

Orientation orientation_for(ImageSize size) {
    return size.width > size.height ? Orientation::Landscape : Orientation::Portrait;
}

std::vector<fs::path> CommandRasterizer::render(const fs::path& pdf, int dpi, const fs::path& out_dir) const {
    fs::create_directories(out_dir);
    const std::string prefix_name = "page";
    auto prefix = (out_dir / prefix_name).string();
    auto err_path = out_dir / ".rasterizer.stderr";

    std::string cmd = template_;
    replace_all(cmd, "{pdf}", shell_quote(pdf.string()));
    replace_all(cmd, "{dpi}", std::to_string(dpi));
    replace_all(cmd, "{out}", shell_quote(out_dir.string()));
    replace_all(cmd, "{prefix}", shell_quote(prefix));
    cmd += " 2> " + shell_quote(err_path.string());

    int status = std::system(cmd.c_str());
    std::string stderr_text;
    if (fs::exists(err_path)) {
        stderr_text = read_text(err_path);
        fs::remove(err_path);
    }
    if (status != 0)
        throw Error(ErrorCode::RasterizerFailed,
                    "command exited with status " + std::to_string(status) + ": " +
                        std::string(text::trim(stderr_text)));

    std::map<int, fs::path> by_page;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = text::lower(entry.path().extension().string());
        if (ext != ".jpg" && ext != ".jpeg" && ext != ".png" && ext != ".ppm" && ext != ".pgm")
            continue;
        if (auto n = page_number_from(entry.path(), prefix_name)) by_page[*n] = entry.path();
    }
    std::vector<fs::path> out;
    for (auto& [n, p] : by_page) out.push_back(p);
    return out;
}

std::vector<PageImage> rasterize(const fs::path& pdf, int dpi, const fs::path& out_dir,
                                 const Rasterizer& rasterizer) {
    if (!fs::is_regular_file(pdf)) throw Error(ErrorCode::FileNotFound, pdf.string());
    if (dpi < 72) throw Error(ErrorCode::InvalidArgument, "dpi must be at least 72");

    auto files = rasterizer.render(pdf, dpi, out_dir);
    if (files.empty()) throw Error(ErrorCode::RasterizerFailed, "no pages produced for " + pdf.string());

    std::vector<PageImage> pages;
    pages.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto size = read_image_size(files[i]);
        if (!size)
            throw Error(ErrorCode::RasterizerFailed, "unreadable image " + files[i].string());
        pages.push_back({static_cast<int>(i + 1), files[i], dpi, orientation_for(*size)});
    }
    write_manifest(out_dir / kManifestName, pages);
    return pages;
}

void write_manifest(const fs::path& path, std::span<const PageImage> pages) {
    auto base = path.parent_path();
    std::ostringstream out;
    for (const auto& p : pages) {
        auto image = p.image_path;
        if (!base.empty()) {
            auto rel = image.lexically_relative(base);
            if (!rel.empty() && *rel.begin() != "..") image = rel;
        }
        out << p.page_number << '\t' << image.generic_string() << '\t' << p.dpi << '\t'
            << to_string(p.orientation) << '\n';
    }
    write_text(path, out.str());
}

std::vector<PageImage> read_manifest(const fs::path& path) {
    auto content = read_text(path);
    auto base = path.parent_path();
    std::vector<PageImage> pages;
    int line_no = 0;
    for (const auto& line : text::split_lines(content)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        std::vector<std::string> cols;
        std::istringstream ss(line);
        for (std::string col; std::getline(ss, col, '\t');) cols.push_back(col);
        auto bad = [&](const std::string& why) {
            return Error(ErrorCode::InvalidArgument,
                         path.string() + ":" + std::to_string(line_no) + ": " + why);
        };
        if (cols.size() != 4) throw bad("expected 4 tab-separated fields");
        PageImage page;
        try {
            page.page_number = std::stoi(cols[0]);
            page.dpi = std::stoi(cols[2]);
        } catch (const std::exception&) {
            throw bad("non-numeric page or dpi");
        }
        fs::path image = cols[1];
        page.image_path = image.is_absolute() ? image : base / image;
        if (cols[3] == "Landscape") page.orientation = Orientation::Landscape;
        else if (cols[3] == "Portrait") page.orientation = Orientation::Portrait;
        else throw bad("unknown orientation '" + cols[3] + "'");
        if (page.dpi <= 0) throw bad("dpi must be positive");
        if (page.page_number != static_cast<int>(pages.size()) + 1)
            throw bad("page numbers must be contiguous from 1");
        pages.push_back(std::move(page));
    }
    return pages;
}

}  // namespace ledgerlift
