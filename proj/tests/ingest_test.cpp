#include <gtest/gtest.h>

#include <fstream>

#include "ledgerlift/digest.hpp"
#include "ledgerlift/ingest.hpp"
#include "test_util.hpp"

using namespace ledgerlift;
using testutil::TempDir;

namespace {

void write_bytes(const fs::path& p, const std::vector<unsigned char>& b) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

std::vector<unsigned char> png(int w, int h) {
    std::vector<unsigned char> b = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A, 0, 0, 0, 13, 'I', 'H', 'D', 'R'};
    for (int v : {w, h})
        for (int shift : {24, 16, 8, 0}) b.push_back(static_cast<unsigned char>((v >> shift) & 0xFF));
    b.insert(b.end(), {8, 2, 0, 0, 0});
    return b;
}

std::vector<unsigned char> jpeg(int w, int h) {
    // SOI, an APP0 segment to skip, then SOF0.
    std::vector<unsigned char> b = {0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x04, 'J', 'F'};
    b.insert(b.end(), {0xFF, 0xC0, 0x00, 0x11, 0x08});
    b.push_back(static_cast<unsigned char>(h >> 8));
    b.push_back(static_cast<unsigned char>(h & 0xFF));
    b.push_back(static_cast<unsigned char>(w >> 8));
    b.push_back(static_cast<unsigned char>(w & 0xFF));
    b.insert(b.end(), 12, 0);
    return b;
}

// Stands in for pdftoppm: writes one PGM per "page" listed in the input file.
fs::path fake_rasterizer(const TempDir& dir) {
    auto script = dir / "fake-pdftoppm.sh";
    write_text(script,
               "#!/bin/sh\n"
               "# usage: fake-pdftoppm.sh <pdf> <dpi> <prefix>\n"
               "if grep -q BROKEN \"$1\"; then echo 'Syntax Error: broken xref' >&2; exit 3; fi\n"
               "n=0\n"
               "while read w h; do\n"
               "  n=$((n+1))\n"
               "  printf 'P5\\n%s %s\\n255\\n' \"$w\" \"$h\" > \"$3-$n.pgm\"\n"
               "done < \"$1\"\n");
    fs::permissions(script, fs::perms::owner_all);
    return script;
}

}  // namespace

TEST(ImageSize, ReadsPngJpegAndPnmHeaders) {
    TempDir dir;
    write_bytes(dir / "a.png", png(2480, 3508));
    write_bytes(dir / "b.jpg", jpeg(3508, 2480));
    write_text(dir / "c.pgm", "P5\n# comment\n640 480\n255\n");
    write_text(dir / "d.txt", "not an image");

    EXPECT_EQ(read_image_size(dir / "a.png")->width, 2480);
    EXPECT_EQ(read_image_size(dir / "a.png")->height, 3508);
    EXPECT_EQ(read_image_size(dir / "b.jpg")->width, 3508);
    EXPECT_EQ(read_image_size(dir / "b.jpg")->height, 2480);
    EXPECT_EQ(read_image_size(dir / "c.pgm")->width, 640);
    EXPECT_FALSE(read_image_size(dir / "d.txt").has_value());
    EXPECT_FALSE(read_image_size(dir / "none.png").has_value());

    EXPECT_EQ(orientation_for({3508, 2480}), Orientation::Landscape);
    EXPECT_EQ(orientation_for({2480, 3508}), Orientation::Portrait);
    EXPECT_EQ(orientation_for({100, 100}), Orientation::Portrait);
}

TEST(Rasterize, CommandTemplateProducesOrderedManifest) {
    TempDir dir;
    auto script = fake_rasterizer(dir);
    // Twelve pages so that lexical and numeric order differ.
    std::string pages;
    for (int i = 1; i <= 12; ++i) pages += (i == 5 ? "3508 2480\n" : "2480 3508\n");
    write_text(dir / "doc with space.pdf", pages);

    CommandRasterizer r(script.string() + " {pdf} {dpi} {prefix}");
    auto out = rasterize(dir / "doc with space.pdf", 300, dir / "pages", r);
    ASSERT_EQ(out.size(), 12u);
    for (int i = 0; i < 12; ++i) {
        EXPECT_EQ(out[static_cast<std::size_t>(i)].page_number, i + 1);
        EXPECT_EQ(out[static_cast<std::size_t>(i)].image_path.filename(), "page-" + std::to_string(i + 1) + ".pgm");
    }
    EXPECT_EQ(out[4].orientation, Orientation::Landscape);
    EXPECT_EQ(out[5].orientation, Orientation::Portrait);

    auto reread = read_manifest(dir / "pages" / kManifestName);
    EXPECT_EQ(reread, out);
    EXPECT_NE(read_text(dir / "pages" / kManifestName).find("page-1.pgm\t300\tPortrait"), std::string::npos);
}

TEST(Rasterize, FailuresCarryRasterizerStderr) {
    TempDir dir;
    auto script = fake_rasterizer(dir);
    write_text(dir / "bad.pdf", "BROKEN\n");
    CommandRasterizer r(script.string() + " {pdf} {dpi} {prefix}");
    try {
        rasterize(dir / "bad.pdf", 300, dir / "out", r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RasterizerFailed);
        EXPECT_NE(std::string(e.what()).find("broken xref"), std::string::npos);
    }

    write_text(dir / "empty.pdf", "");
    try {
        rasterize(dir / "empty.pdf", 300, dir / "out2", r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RasterizerFailed);
    }
}

TEST(Rasterize, PreconditionErrors) {
    TempDir dir;
    CommandRasterizer r("true");
    try {
        rasterize(dir / "missing.pdf", 300, dir / "out", r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
    }
    write_text(dir / "x.pdf", "1 1\n");
    try {
        rasterize(dir / "x.pdf", 50, dir / "out", r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    }
}

TEST(Manifest, RejectsMalformedLines) {
    TempDir dir;
    auto path = dir / "manifest.tsv";
    for (const char* body : {"1\ta.jpg\t300\n", "1\ta.jpg\t300\tSideways\n", "2\ta.jpg\t300\tPortrait\n",
                             "1\ta.jpg\tx\tPortrait\n"}) {
        write_text(path, body);
        EXPECT_THROW(read_manifest(path), Error) << body;
    }
    std::vector<PageImage> pages{{1, dir / "img/p1.jpg", 200, Orientation::Portrait},
                                 {2, "/abs/p2.jpg", 200, Orientation::Landscape}};
    write_manifest(path, pages);
    EXPECT_EQ(read_manifest(path), pages);
    EXPECT_NE(read_text(path).find("img/p1.jpg"), std::string::npos);
}
