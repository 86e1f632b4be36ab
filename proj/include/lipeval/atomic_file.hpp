#pragma once

#include <filesystem>
#include <functional>
#include <ostream>

namespace lipeval {

/// Writes through a sibling temporary file and renames it into place, so
/// `path` either keeps its old content or receives the complete new one.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

}  // namespace lipeval
