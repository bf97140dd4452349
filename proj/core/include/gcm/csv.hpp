#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gcm {

/// Fixed 17-significant-digit formatting so CSV output is reproducible and
/// round-trips through double exactly.
std::string format_real(double v);

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

} // namespace gcm
