// Kronecker symbol (d|n) for n >= 1.
#pragma once

#include <cstdint>

namespace quadl {

int jacobi(std::int64_t a, std::int64_t n);  // n odd, positive
int kronecker(std::int64_t d, std::int64_t n);

}  // namespace quadl
