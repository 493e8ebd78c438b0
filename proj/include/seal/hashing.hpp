#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace seal {

// SHA-256, lowercase hex.
std::string sha256_hex(const std::uint8_t* data, std::size_t size);
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace seal
