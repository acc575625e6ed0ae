#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "doctest.h"

#include "gtr/core_types.hpp"
#include "gtr/error.hpp"
#include "gtr/i2a.hpp"

namespace fixtures {

inline gtr::Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const gtr::Error& e) {
        return e.code();
    }
    FAIL("expected gtr::Error");
    return gtr::Errc::IoError;
}

// Values in key order: clothes color/style, pants color/style, shoes
// color/style, gender, hair color, hair length, glasses, phone, umbrella,
// bike, bag.
inline gtr::AttributeValues person(std::string gender = "woman", bool glasses = false, bool phone = false,
                                   bool umbrella = false, bool bike = false, bool bag = false) {
    return {"red",     "shirt", "blue",    "jeans", "white", "sneakers", std::move(gender), "black", "long",
            glasses ? "present" : "absent", phone ? "present" : "absent", umbrella ? "present" : "absent",
            bike ? "present" : "absent",    bag ? "present" : "absent"};
}

inline gtr::AttributeSet set_of(const gtr::AttributeValues& values, std::string id = "img") {
    return gtr::truth_attribute_set(id, values);
}

inline std::filesystem::path workdir(const std::string& name) {
    const auto dir = std::filesystem::path(GTR_TEST_WORKDIR) / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

}  // namespace fixtures
