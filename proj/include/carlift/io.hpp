#pragma once

#include <filesystem>
#include <string>

#include "carlift/numerics.hpp"

namespace carlift {

/// Canonical 17-significant-digit rendering; all file output goes through
/// this so reruns are byte identical.
std::string format_double(double v);

/// Complex entry rendering "re+imi" (e.g. "1.5+-0.25i" for 1.5 - 0.25i).
std::string format_complex(CScalar z);

/// Writes content with "\n" line endings regardless of platform.
void write_text_file(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace carlift
