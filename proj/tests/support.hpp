#pragma once

// Shared helpers for the Catch2 suites.

#include <string>
#include <utility>

#include <catch2/catch_amalgamated.hpp>

#include "sptrack/core.hpp"

namespace testutil {

// Runs fn, which must throw sptrack::error, and returns (code, message).
template <typename Fn>
std::pair<sptrack::errc, std::string> caught(Fn&& fn) {
    try {
        fn();
    } catch (const sptrack::error& e) {
        return {e.code(), e.what()};
    }
    FAIL("expected sptrack::error, nothing was thrown");
    return {sptrack::errc::invariant_violation, ""};
}

template <typename Fn>
sptrack::errc thrown_code(Fn&& fn) {
    return caught(std::forward<Fn>(fn)).first;
}

inline bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

} // namespace testutil
