#include "quadl/qforms.hpp"

#include <stdexcept>

namespace quadl {

std::int64_t class_number(std::int64_t d) {
    if (d >= 0 || !is_fundamental(d)) throw std::invalid_argument("class_number: need fundamental d < 0");
    const std::int64_t D = -d;
    std::int64_t h = 0;
    for (std::int64_t a = 1; 3 * a * a <= D; ++a) {
        for (std::int64_t b = (D & 1); b <= a; b += 2) {
            std::int64_t num = b * b + D;
            if (num % (4 * a) != 0) continue;
            std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (std::gcd(std::gcd(a, b), c) != 1) continue;
            h += (b > 0 && b < a && c > a) ? 2 : 1;
        }
    }
    return h;
}

TripleCounts count_triples(std::int64_t X) {
    if (X < 4) throw std::invalid_argument("count_triples: X >= 4");
    TripleCounts t;
    const std::int64_t amax = max_a_for(X);
    for (std::int64_t a = 1; a <= amax; ++a) {
        for (std::int64_t b = 0; b <= a; ++b) {
            const std::int64_t chi = (X + b * b) / (4 * a);
            if (chi < a) continue;
            const std::int64_t g = std::gcd(a, b);
            const bool pair = b > 0 && b < a;
            for (std::int64_t c = a; c <= chi; ++c) {
                const std::uint64_t w = (pair && c > a) ? 2 : 1;
                t.total += w;
                if (g == 1 || std::gcd(g, c) == 1) {
                    t.primitive += w;
                    ++t.weighted;
                }
            }
        }
    }
    return t;
}

}  // namespace quadl
