#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>

#include "ddae/errors.hpp"
#include "ddae/model_json.hpp"

namespace ddae::cli {

std::string file_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot read output file " + path.string());
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_manifest(RunManifest manifest, const std::filesystem::path& dir) {
    manifest.output_hashes.clear();
    for (const auto& name : manifest.outputs) {
        manifest.output_hashes.push_back(file_hash(dir / name));
    }
    nlohmann::json outputs = nlohmann::json::array();
    for (std::size_t i = 0; i < manifest.outputs.size(); ++i) {
        outputs.push_back({{"file", manifest.outputs[i]}, {"fnv1a", manifest.output_hashes[i]}});
    }
    const nlohmann::json j = {
        {"command", manifest.command},   {"argv", manifest.argv},       {"params", manifest.params},
        {"model_hash", manifest.model_hash}, {"version", manifest.version}, {"wall_time_s", manifest.wall_time},
        {"outputs", outputs},
    };
    std::ofstream out(dir / "manifest.json");
    if (!out) {
        throw Error("cannot write manifest in " + dir.string());
    }
    out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read manifest " + path.string());
    }
    RunManifest m;
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        m.command = j.at("command").get<std::string>();
        m.argv = j.at("argv").get<std::vector<std::string>>();
        m.params = j.value("params", nlohmann::json::object());
        m.model_hash = j.value("model_hash", "");
        m.version = j.value("version", "");
        m.wall_time = j.value("wall_time_s", 0.0);
        for (const auto& o : j.at("outputs")) {
            m.outputs.push_back(o.at("file").get<std::string>());
            m.output_hashes.push_back(o.at("fnv1a").get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

std::vector<std::string> strip_out_flag(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out") {
            ++i;
            continue;
        }
        if (args[i].rfind("--out=", 0) == 0) {
            continue;
        }
        out.push_back(args[i]);
    }
    return out;
}

}  // namespace ddae::cli
