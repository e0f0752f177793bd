#ifndef TCLF_MANIFEST_HPP
#define TCLF_MANIFEST_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tclf {

inline constexpr const char* kToolVersion = "0.1.0";

// Written next to every training/evaluation output: everything needed to
// reproduce the run bit-for-bit.
struct RunManifest {
    std::string command;
    std::vector<std::string> arguments;          // config snapshot as given
    std::map<std::string, std::string> inputs;   // path -> content digest
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string started_at;
    std::string finished_at;
};

std::string file_digest_hex(const std::string& path);

void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace tclf

#endif
