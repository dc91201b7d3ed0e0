// Copyright 2026 The tddens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "tddens/estimate.hpp"
#include "tddens/measurement.hpp"

namespace tddens {

/// Density from Z reads of qubit p; `record.successes` counts reads of 1.
///
/// With `unbias` set, the known readout channel is inverted:
/// n = (p' - eps) / (1 - 2 eps), and the standard error is scaled by the same
/// factor.
inline DensityEstimate estimate_direct_z(ShotRecord const& record, std::optional<NoiseModel> unbias = std::nullopt) {
    if (record.shots <= 0) throw std::invalid_argument("estimate_direct_z: shots must be positive");
    if (record.successes < 0 || record.successes > record.shots) {
        throw std::invalid_argument("estimate_direct_z: successes outside [0, shots]");
    }
    double const shots = static_cast<double>(record.shots);
    double const p = static_cast<double>(record.successes) / shots;
    double const se = std::sqrt(p * (1.0 - p) / shots);
    if (!unbias) return make_estimate(p, se, record.shots, Method::DirectZ);
    double const eps = unbias->flip_probability();
    double const scale = 1.0 - 2.0 * eps;
    return make_estimate((p - eps) / scale, se / scale, record.shots, Method::DirectZ);
}

}  // namespace tddens
