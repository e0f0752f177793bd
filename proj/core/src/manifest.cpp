#include "tclf/manifest.hpp"

#include <json.hpp>

#include "tclf/digest.hpp"
#include "tclf/io.hpp"

namespace tclf {

std::string file_digest_hex(const std::string& path) {
    return "fnv1a64:" + to_hex(fnv1a64(read_file(path)));
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["arguments"] = manifest.arguments;
    j["inputs"] = manifest.inputs;
    j["seed"] = manifest.seed;
    j["tool_version"] = manifest.tool_version;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace tclf
