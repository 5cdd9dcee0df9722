#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace clades {

// Format with 17 significant digits (round-trippable doubles).
std::string format_g17(double v);

// Write via a temp file in the same directory plus rename, so readers
// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace clades
