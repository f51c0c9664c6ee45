#pragma once

#include <optional>
#include <string>
#include <vector>

namespace damctl {

/// 10 significant digits, '.' decimal separator, locale-independent.
std::string format_double(double v);

/// Rectangular CSV: fixed header, LF line endings.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

/// Writes to the path (IoError with path context on failure) or, with no
/// path, to the stream given.
void write_output(const std::string& content, const std::optional<std::string>& path,
                  std::ostream& fallback);

inline constexpr int kSchemaVersion = 1;

} // namespace damctl
