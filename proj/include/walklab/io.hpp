#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace walklab {

// IEEE double with 17 significant digits, round-trip exact.
std::string format_double(double v);

// RFC-4180 CSV with a header row; all cells preformatted strings.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Write-then-rename so partial files are never left behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::uint64_t fnv1a(std::string_view bytes);
std::string fingerprint_hex(const nlohmann::ordered_json& j);

}  // namespace walklab
