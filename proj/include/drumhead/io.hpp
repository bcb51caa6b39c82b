#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "drumhead/shape.hpp"

namespace drumhead {

/// Shortest decimal that round-trips (max 17 significant digits).
std::string format_double(double v);

/// Parses a full double; throws std::invalid_argument on trailing garbage.
double parse_double(std::string_view text);

std::vector<std::string> split_fields(std::string_view line, char sep);

/// Shape record: "a b c0 c1 s1 c2 s2 ...", space separated.
std::string format_shape(const Shape& shape);
Shape parse_shape(std::string_view line);

/// Reads every non-empty, non-'#' line of a shape file.
std::vector<Shape> read_shapes(std::istream& is);

}  // namespace drumhead
