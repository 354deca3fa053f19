#pragma once

#include <string_view>

namespace qlh {

/// Library version plus the git description captured at configure time.
std::string_view version_string() noexcept;

}  // namespace qlh
