#pragma once

#include <string>

#include "rectri/common.hpp"
#include "rectri/error.hpp"

namespace rectri {

// GEMM tiling parameters: panel heights/widths of the blocked driver.
struct GemmBlocking {
  index_t mc = 64;
  index_t kc = 64;
  index_t nc = 64;
};

// Execution backend for GEMM and the production base kernels. parallel_width
// is the worker count; 1 means sequential. Every operation is externally
// synchronous regardless of width.
struct Backend {
  std::string name = "seq";
  int parallel_width = 1;
  GemmBlocking blocking{};

  static Backend seq() { return Backend{}; }

  // width = 0 picks the hardware concurrency.
  static Backend par(int width = 0);
};

inline void validate(const Backend& backend) {
  if (backend.parallel_width < 1)
    throw ConfigError("backend parallel_width must be >= 1");
  if (backend.blocking.mc < 1 || backend.blocking.kc < 1 ||
      backend.blocking.nc < 1)
    throw ConfigError("backend block sizes must be >= 1");
}

}  // namespace rectri
