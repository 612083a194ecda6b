#pragma once

#include <string>
#include <vector>

#include "structpca/structure.hpp"

namespace structpca {

struct CaseFixture {
  std::string name;
  ConstraintModel model;  // carries the structure mask
};

const std::vector<std::string>& registry_names();

/// Built-in case studies: "flow-mix" (3x5 flow-mixing network), "cs1" (3x6)
/// and "cs3" (4x6, with repeated and sub-structured equations). Raises
/// UnknownCase otherwise.
CaseFixture registry_lookup(const std::string& name);

}  // namespace structpca
