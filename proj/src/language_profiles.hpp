#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace mmweb::detail {

/// (label, training text) pairs for the built-in language profiles.
const std::vector<std::pair<std::string_view, std::string_view>>& builtin_language_profiles();

}  // namespace mmweb::detail
