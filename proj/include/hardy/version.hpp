// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace hardy {

inline constexpr const char* hardy_version = "0.1.0";

}  // namespace hardy
