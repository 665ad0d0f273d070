// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

namespace infowave {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace infowave
