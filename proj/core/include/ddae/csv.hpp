#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace ddae {

/// Shortest round-trip-safe decimal form used for every numeric output:
/// 17 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_real(double value);

/// Minimal comma-separated writer. Fields are written verbatim.
class CsvWriter {
public:
    /// Throws ddae::Error when the file cannot be opened.
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& field(std::string_view text);
    CsvWriter& field(double value);
    CsvWriter& field(long long value);
    void end_row();
    /// Flushes and closes the file; throws ddae::Error when the write failed.
    void close();

private:
    std::ofstream out_;
    bool row_started_ = false;
};

}  // namespace ddae
