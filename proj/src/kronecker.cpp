#include "quadl/kronecker.hpp"

#include <stdexcept>
#include <utility>

namespace quadl {

int jacobi(std::int64_t a, std::int64_t n) {
    if (n <= 0 || (n & 1) == 0) throw std::invalid_argument("jacobi: n must be odd and positive");
    a %= n;
    if (a < 0) a += n;
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const std::int64_t r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

int kronecker(std::int64_t d, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("kronecker: n >= 1 required");
    int t = 1;
    if ((n & 1) == 0) {
        if ((d & 1) == 0) return 0;
        const std::int64_t r = ((d % 8) + 8) % 8;
        const int chi2 = (r == 1 || r == 7) ? 1 : -1;
        while ((n & 1) == 0) {
            n >>= 1;
            t *= chi2;
        }
    }
    if (n == 1) return t;
    return t * jacobi(d, n);
}

}  // namespace quadl
