#ifndef TCLF_DIGEST_HPP
#define TCLF_DIGEST_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace tclf {

// 64-bit FNV-1a. Used for model-file checksums, input-file digests in run
// manifests, and quick equality fingerprints in tests. Not cryptographic.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= static_cast<std::uint64_t>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

}  // namespace tclf

#endif
