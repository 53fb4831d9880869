// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace vidaug {

/// Files under data/ compiled into the library, keyed by their path relative
/// to data/ (e.g. "prompts/imageability.txt"). Throws Error for unknown names.
std::string_view resource(std::string_view name);

}  // namespace vidaug
