#pragma once

#include <cstdint>
#include <random>

namespace driftwatch {

// splitmix64 finalizer. This is the fixed mixing function behind all seed
// derivation in the library.
std::uint64_t mix64(std::uint64_t z);

// Substream seeds. A Monte Carlo run with base seed B gives replication r the
// seed derive_seed(B, n, r, slot), so each replication is reproducible on its
// own, independent of execution order or worker count. Slot 0 is the path
// generator, slot 1 the contamination stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id1, std::uint64_t id2);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t id1, std::uint64_t id2,
                          std::uint64_t id3);

// Seeded uniform/normal generator. Normal variates use the Marsaglia polar
// method on top of std::mt19937_64, so values do not depend on the standard
// library's std::normal_distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on the open interval (0, 1).
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal; one spare value cached per generated pair.
    double normal();

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace driftwatch
