#ifndef TCLF_IO_HPP
#define TCLF_IO_HPP

#include <string>

namespace tclf {

std::string read_file(const std::string& path);

// Writes via a temp file in the same directory, then renames into place, so
// readers never observe a partially written file.
void write_file_atomic(const std::string& path, const std::string& content);

bool file_exists(const std::string& path);

}  // namespace tclf

#endif
