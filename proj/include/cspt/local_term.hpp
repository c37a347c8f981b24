#pragma once

#include <string>

#include "cspt/tensor.hpp"

namespace cspt {

/// A k-site operator block acting on consecutive sites.
struct LocalTerm {
  int span = 1;
  ComplexTensor matrix;  // d^span x d^span
  std::string tag;
};

}  // namespace cspt
