#include "gtr/synthetic.hpp"

#include <cstdio>
#include <set>
#include <span>

#include "gtr/a2t.hpp"
#include "gtr/error.hpp"
#include "gtr/rng.hpp"

namespace gtr {

namespace {

constexpr std::string_view kGenders[] = {"man", "woman"};
constexpr std::string_view kHairColors[] = {"black", "brown", "blonde", "gray"};
constexpr std::string_view kColors[] = {"red",  "blue",   "white",  "black",  "green", "yellow",
                                        "gray", "pink",   "purple", "orange", "brown"};
constexpr std::string_view kClothes[] = {"shirt", "t-shirt", "jacket", "coat", "sweater", "dress", "hoodie"};
constexpr std::string_view kPants[] = {"jeans", "trousers", "shorts", "skirt", "leggings"};
constexpr std::string_view kShoes[] = {"sneakers", "boots", "sandals", "shoes", "heels"};

struct Presence {
    AttributeKey key;
    double probability;
};
constexpr Presence kAccessories[] = {{AttributeKey::Glasses, 0.3},
                                     {AttributeKey::Phone, 0.3},
                                     {AttributeKey::Umbrella, 0.15},
                                     {AttributeKey::Bike, 0.15},
                                     {AttributeKey::Bag, 0.5}};

std::string pick(Rng& rng, std::span<const std::string_view> options) {
    return std::string(options[rng.uniform_index(options.size())]);
}

AttributeValues random_person(Rng& rng) {
    using K = AttributeKey;
    AttributeValues v;
    v[key_index(K::Gender)] = pick(rng, kGenders);
    v[key_index(K::HairColor)] = pick(rng, kHairColors);
    v[key_index(K::HairLength)] = std::string(boolean_token(K::HairLength, rng.bernoulli(0.5)));
    v[key_index(K::ClothesColor)] = pick(rng, kColors);
    v[key_index(K::ClothesStyle)] = pick(rng, kClothes);
    v[key_index(K::PantsColor)] = pick(rng, kColors);
    v[key_index(K::PantsStyle)] = pick(rng, kPants);
    v[key_index(K::ShoesColor)] = pick(rng, kColors);
    v[key_index(K::ShoesStyle)] = pick(rng, kShoes);
    for (const auto& acc : kAccessories) {
        v[key_index(acc.key)] = std::string(boolean_token(acc.key, rng.bernoulli(acc.probability)));
    }
    return v;
}

std::string article(std::string_view word) {
    return word.find_first_of("aeiou") == 0 ? "an" : "a";
}

// Human-style description with a few phrasings; deliberately not the
// caption template.
std::string describe(const AttributeValues& v, Rng& rng) {
    using K = AttributeKey;
    auto at = [&](K k) -> const std::string& { return v[key_index(k)]; };
    const std::string hair = at(K::HairLength) + " " + at(K::HairColor) + " hair";
    const std::string top = at(K::ClothesColor) + " " + at(K::ClothesStyle);
    const std::string bottom = at(K::PantsColor) + " " + at(K::PantsStyle);
    const std::string feet = at(K::ShoesColor) + " " + at(K::ShoesStyle);

    std::string text;
    switch (rng.uniform_index(3)) {
        case 0:
            text = "A " + at(K::Gender) + " with " + hair + " is wearing " + article(top) + " " + top + ", " +
                   bottom + " and " + feet + ".";
            break;
        case 1:
            text = "This " + at(K::Gender) + " has " + hair + " and wears " + article(top) + " " + top +
                   " with " + bottom + " and a pair of " + feet + ".";
            break;
        default:
            text = "The person is " + article(at(K::Gender)) + " " + at(K::Gender) + " in " + article(top) +
                   " " + top + " and " + bottom + ", wearing " + feet + ", with " + hair + ".";
            break;
    }

    std::vector<std::string> acts;
    if (is_affirmative(K::Glasses, at(K::Glasses))) acts.emplace_back("wears glasses");
    if (is_affirmative(K::Bag, at(K::Bag))) acts.emplace_back("carries a bag");
    if (is_affirmative(K::Phone, at(K::Phone))) acts.emplace_back("holds a phone");
    if (is_affirmative(K::Umbrella, at(K::Umbrella))) acts.emplace_back("holds an umbrella");
    if (is_affirmative(K::Bike, at(K::Bike))) acts.emplace_back("rides a bike");
    if (!acts.empty()) {
        text += " ";
        text += pronoun_for(at(K::Gender));
        for (std::size_t i = 0; i < acts.size(); ++i) {
            if (i > 0) text += (i + 1 == acts.size()) ? " and" : ",";
            text += " " + acts[i];
        }
        text += ".";
    }
    return text;
}

std::string numbered(const char* prefix, std::size_t n, int width) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
    return buf;
}

}  // namespace

Manifest make_synthetic_corpus(const SyntheticSpec& spec) {
    if (spec.identities == 0 || spec.images_per_identity == 0 ||
        spec.train_identities + spec.val_identities > spec.identities) {
        throw Error(Errc::InvalidArgument, "synthetic corpus split sizes are inconsistent");
    }
    Rng people(derive_seed(spec.seed, "synthetic/people"));
    std::set<AttributeValues> seen;
    std::vector<AttributeValues> identities;
    while (identities.size() < spec.identities) {
        auto v = random_person(people);
        if (seen.insert(v).second) identities.push_back(std::move(v));
    }

    Rng phrasing(derive_seed(spec.seed, "synthetic/phrasing"));
    Manifest manifest;
    for (std::size_t id = 0; id < spec.identities; ++id) {
        const Split split = id < spec.train_identities                          ? Split::Train
                            : id < spec.train_identities + spec.val_identities ? Split::Val
                                                                                : Split::Test;
        for (std::size_t k = 0; k < spec.images_per_identity; ++k) {
            ManifestEntry e;
            e.image.image_id = numbered("img_", id * spec.images_per_identity + k, 5);
            e.image.path = "images/" + e.image.image_id + ".jpg";
            e.image.identity_id = numbered("id_", id, 3);
            e.image.split = split;
            e.attributes = identities[id];
            e.caption = describe(identities[id], phrasing);
            manifest.entries.push_back(std::move(e));
        }
    }
    return manifest;
}

std::vector<TextRecord> make_style_corpus(std::size_t count, std::uint64_t seed) {
    Rng people(derive_seed(seed, "style/people"));
    Rng phrasing(derive_seed(seed, "style/phrasing"));
    std::vector<TextRecord> corpus;
    corpus.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        corpus.push_back({numbered("txt_", i, 5), describe(random_person(people), phrasing)});
    }
    return corpus;
}

}  // namespace gtr
