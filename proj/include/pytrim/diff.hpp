#pragma once

#include <string>
#include <string_view>

namespace pytrim {

/// Unified diff (`--- a/path`, `+++ b/path`, `@@` hunks) of two texts.
/// Empty when the texts are equal.
std::string unified_diff(std::string_view before, std::string_view after, const std::string &path,
                         int context = 3);

} // namespace pytrim
