#pragma once

#include <cstdint>
#include <vector>

#include "gtr/manifest.hpp"

namespace gtr {

// A person-search corpus with known attributes. Every identity has its own
// attribute vector; identities are assigned to splits in order (train, then
// val, then test) so test identities are never seen in training. Each image
// carries a held-out reference description phrased differently from the
// caption template.
struct SyntheticSpec {
    std::size_t identities = 50;
    std::size_t images_per_identity = 4;
    std::size_t train_identities = 36;
    std::size_t val_identities = 4;
    std::uint64_t seed = 2024;
};

Manifest make_synthetic_corpus(const SyntheticSpec& spec);

// Free-standing person descriptions in the same human style, for people who
// are not in any manifest. Serves as the unpaired text corpus of lm mode.
std::vector<TextRecord> make_style_corpus(std::size_t count, std::uint64_t seed);

}  // namespace gtr
