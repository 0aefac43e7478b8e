// SPDX-License-Identifier: Apache-2.0
//
// submimo - sub-GHz massive MIMO channel analysis toolkit
// Copyright (C) 2026 The submimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>

namespace submimo {

// Convention used throughout: channel samples are linear voltage gains,
// so power quantities convert with 10*log10(|h|^2) and amplitude scaling
// with 20*log10(|h|).

[[nodiscard]] inline double db_from_power(double linear_power) noexcept {
    return 10.0 * std::log10(linear_power);
}

[[nodiscard]] inline double power_from_db(double db) noexcept {
    return std::pow(10.0, db / 10.0);
}

[[nodiscard]] inline double db_from_amplitude(double linear_amplitude) noexcept {
    return 20.0 * std::log10(linear_amplitude);
}

[[nodiscard]] inline double amplitude_from_db(double db) noexcept {
    return std::pow(10.0, db / 20.0);
}

} // namespace submimo
