#pragma once

#include <string>
#include <vector>

namespace invwish {

/// Floats in all machine-readable output carry 17 significant digits.
std::string g17(double v);

/// Parse "lo:hi:count" into count equally spaced points from lo to hi
/// (inclusive). count == 1 requires lo == hi; otherwise lo < hi.
std::vector<double> parse_grid_spec(const std::string& spec);

/// Parse a comma list of strictly increasing positive integers.
std::vector<int> parse_dim_list(const std::string& spec);

void write_text_file(const std::string& path, const std::string& content);

} // namespace invwish
