#include "qcoins/rng.h"

namespace qcoins {

uint64_t derive_seed(uint64_t master_seed, uint64_t index) {
    uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng trial_rng(uint64_t master_seed, uint64_t index) {
    return Rng(derive_seed(master_seed, index));
}

double uniform01(Rng &rng) {
    return (double)(rng() >> 11) * 0x1.0p-53;
}

bool bernoulli(Rng &rng, double p) {
    return uniform01(rng) < p;
}

}  // namespace qcoins
