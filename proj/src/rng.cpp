#include "driftwatch/rng.hpp"

#include <cmath>

namespace driftwatch {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id) {
    return mix64(mix64(base) ^ mix64(id));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id1, std::uint64_t id2) {
    return derive_seed(derive_seed(base, id1), id2);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id1, std::uint64_t id2,
                          std::uint64_t id3) {
    return derive_seed(derive_seed(base, id1, id2), id3);
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double v1 = 0.0, v2 = 0.0, s = 0.0;
    do {
        v1 = 2.0 * uniform() - 1.0;
        v2 = 2.0 * uniform() - 1.0;
        s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    has_spare_ = true;
    return v1 * f;
}

}  // namespace driftwatch
