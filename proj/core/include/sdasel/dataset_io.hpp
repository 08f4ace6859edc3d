#pragma once

#include <iosfwd>
#include <string>

#include "sdasel/dataset.hpp"

namespace sdasel {

/// CSV with header `y,x1,...,xp`; y in {1,2}. Values are written in the
/// shortest decimal form that round-trips the double exactly.
void write_dataset_csv(std::ostream& out, const Dataset& data);
std::string dataset_to_csv(const Dataset& data);

/// Parses the format above. Errors carry "line L, column C" diagnostics.
Dataset read_dataset_csv(std::istream& in);
Dataset parse_dataset_csv(const std::string& text);
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const std::string& path, const Dataset& data);

/// Shortest round-trip decimal for a double.
std::string format_shortest(double value);

/// Fixed 17-significant-digit decimal ('.' separator).
std::string format_17g(double value);

}  // namespace sdasel
