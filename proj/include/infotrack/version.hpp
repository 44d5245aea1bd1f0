// Copyright 2026 The infotrack Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace infotrack {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace infotrack
