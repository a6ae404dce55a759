#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ddae::cli {

/// Everything needed to reproduce a run. `argv` excludes the program name
/// and the --out option, so a replay can redirect its outputs.
struct RunManifest {
    std::string command;
    std::vector<std::string> argv;
    nlohmann::json params = nlohmann::json::object();
    std::string model_hash;
    std::string version;
    double wall_time = 0.0;
    std::vector<std::string> outputs;  // file names relative to the output directory
    std::vector<std::string> output_hashes;
};

/// Writes manifest.json into `dir`, hashing every listed output first.
void write_manifest(RunManifest manifest, const std::filesystem::path& dir);

RunManifest read_manifest(const std::filesystem::path& path);

/// FNV-1a of a file's bytes, as 16 hex digits.
std::string file_hash(const std::filesystem::path& path);

/// Splits off "--out DIR" / "--out=DIR", returning the remaining arguments.
std::vector<std::string> strip_out_flag(const std::vector<std::string>& args);

/// Wall-clock stopwatch for the manifest.
class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace ddae::cli
