#pragma once

#include <map>
#include <string>

namespace kahfm {

/// Flat `key = value` config. `[section]` headers prefix the keys that
/// follow ("section.key"); '#' starts a comment.
std::map<std::string, std::string> parse_config(const std::string& path);

}  // namespace kahfm
