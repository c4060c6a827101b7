#pragma once

namespace ledgerflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ledgerflow
