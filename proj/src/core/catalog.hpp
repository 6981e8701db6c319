#pragma once

#include <string>
#include <vector>

#include "core/expr.hpp"

namespace nscert {

// Named built-in fields with hand-written closed-form derivatives. They are
// usable even if the expression parser were broken, and each carries a
// parseable text equivalent so the two derivative paths can cross-check each
// other. zero_trace / divergence_free refer to the unit cube.
struct CatalogEntry {
  std::string name;
  VectorField velocity;
  ScalarFieldPtr pressure;  // null unless the entry is a (velocity, pressure) pair
  std::string velocity_text;
  std::string pressure_text;
  bool divergence_free = false;
  bool zero_trace = false;
};

// Accepts "sine" as well as "sine_catalog"; returns nullptr when unknown.
const CatalogEntry* find_catalog(const std::string& name);

std::vector<std::string> catalog_names();

}  // namespace nscert
