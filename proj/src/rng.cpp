#include "kahfm/rng.hpp"

namespace kahfm {

std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
    // FNV-1a over the label, mixed with base and index through splitmix
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    Rng mixer(base ^ h ^ (index * 0x9e3779b97f4a7c15ULL));
    return mixer.next();
}

}  // namespace kahfm
