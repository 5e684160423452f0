#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ledgerlift {

enum class Orientation { Portrait, Landscape };
std::string_view to_string(Orientation o);

struct PageImage {
    int page_number = 0;
    std::filesystem::path image_path;
    int dpi = 300;
    Orientation orientation = Orientation::Portrait;

    friend bool operator==(const PageImage&, const PageImage&) = default;
};

struct ImageSize {
    int width = 0;
    int height = 0;
};

// Reads pixel dimensions from a JPEG, PNG or PNM header.
std::optional<ImageSize> read_image_size(const std::filesystem::path& path);
Orientation orientation_for(ImageSize size);

// Renders every page of a PDF into `out_dir` and returns the image paths in
// page order.
class Rasterizer {
public:
    virtual ~Rasterizer() = default;
    virtual std::vector<std::filesystem::path> render(const std::filesystem::path& pdf, int dpi,
                                                      const std::filesystem::path& out_dir) const = 0;
};

// Shells out to an external converter. The template may use {pdf}, {dpi},
// {out} and {prefix}; output files must be named <prefix>-<page>.<ext>.
class CommandRasterizer final : public Rasterizer {
public:
    static constexpr const char* kDefaultCommand = "pdftoppm -jpeg -r {dpi} {pdf} {prefix}";

    explicit CommandRasterizer(std::string command_template = kDefaultCommand)
        : template_(std::move(command_template)) {}

    std::vector<std::filesystem::path> render(const std::filesystem::path& pdf, int dpi,
                                              const std::filesystem::path& out_dir) const override;

    const std::string& command_template() const { return template_; }

private:
    std::string template_;
};

inline constexpr int kDefaultDpi = 300;
inline constexpr const char* kManifestName = "manifest.tsv";

// Rasterizes the document and persists `out_dir/manifest.tsv`. Pages are not
// rotated; orientation is only recorded.
std::vector<PageImage> rasterize(const std::filesystem::path& pdf, int dpi,
                                 const std::filesystem::path& out_dir, const Rasterizer& rasterizer);

// Line format: page_number<TAB>image_path<TAB>dpi<TAB>orientation. Image
// paths inside the manifest directory are stored relative to it.
void write_manifest(const std::filesystem::path& path, std::span<const PageImage> pages);
std::vector<PageImage> read_manifest(const std::filesystem::path& path);

}  // namespace ledgerlift
