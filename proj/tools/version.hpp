#pragma once

namespace dapkit::cli {
inline constexpr const char* kVersion = "0.3.0";
}
