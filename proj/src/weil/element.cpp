#include "nilgeom/weil/element.hpp"

namespace nilgeom::weil {

std::vector<std::string> default_generator_names(std::size_t n) {
  if (n == 1) return {"x"};
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

}  // namespace nilgeom::weil
