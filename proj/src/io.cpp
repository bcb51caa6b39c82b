#include "drumhead/io.hpp"

#include <charconv>
#include <istream>
#include <stdexcept>

namespace drumhead {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  if (sep == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) out.emplace_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string format_shape(const Shape& shape) {
  std::string out = format_double(shape.offset()) + ' ' + format_double(shape.scale());
  for (Eigen::Index i = 0; i < shape.dof(); ++i) out += ' ' + format_double(shape.coefficients()(i));
  return out;
}

Shape parse_shape(std::string_view line) {
  const auto fields = split_fields(line, ' ');
  if (fields.size() < 3 || (fields.size() - 2) % 2 == 0)
    throw std::invalid_argument("shape record needs 'a b c0 [c_k s_k]...' (odd coefficient count)");
  Shape::Vector c(Eigen::Index(fields.size() - 2));
  for (std::size_t i = 2; i < fields.size(); ++i) c(Eigen::Index(i - 2)) = parse_double(fields[i]);
  return Shape(std::move(c), parse_double(fields[0]), parse_double(fields[1]));
}

std::vector<Shape> read_shapes(std::istream& is) {
  std::vector<Shape> shapes;
  std::string line;
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    shapes.push_back(parse_shape(line));
  }
  return shapes;
}

}  // namespace drumhead
