#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ledgerlift {

// Lower-case hex SHA-256.
std::string sha256_hex(std::span<const std::byte> bytes);
std::string sha256_hex(std::string_view text);
std::string sha256_file(const std::filesystem::path& path);
// Digest over relative paths and contents of every regular file, in path order.
std::string sha256_tree(const std::filesystem::path& dir);

std::string base64_encode(std::span<const std::byte> bytes);

std::vector<std::byte> read_binary(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace ledgerlift
