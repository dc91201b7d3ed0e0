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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tddens {

enum class Method { DirectZ, HarmonicInversion, Bayesian };

inline constexpr std::array<Method, 3> kAllMethods = {Method::DirectZ, Method::HarmonicInversion, Method::Bayesian};

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::DirectZ: return "direct";
        case Method::HarmonicInversion: return "harminv";
        case Method::Bayesian: return "bayes";
    }
    return "?";
}

inline Method parse_method(std::string_view s) {
    for (Method m : kAllMethods) {
        if (to_string(m) == s) return m;
    }
    throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

/// Estimates within this distance of 0 or 1 carry the boundary flag.
inline constexpr double kBoundaryMargin = 0.025;

struct DensityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t shots_used = 0;
    Method method = Method::DirectZ;

    bool boundary = false;
    /// Harmonic inversion found no oscillating mode; value was set to 0.
    bool no_signal = false;
    /// A recovered mode had negative decay that was clamped to zero.
    bool decay_clamped = false;
    /// Harmonic inversion only: 2 (1 - A0) from the DC mode.
    std::optional<double> dc_density;

    bool flagged() const { return boundary || no_signal; }
};

/// Clamps to [0, 1] and sets the boundary flag.
inline DensityEstimate make_estimate(double value, double std_error, std::int64_t shots_used, Method method) {
    DensityEstimate e;
    e.value = std::clamp(std::isfinite(value) ? value : 0.0, 0.0, 1.0);
    e.std_error = std::isfinite(std_error) ? std::max(std_error, 0.0) : 0.0;
    e.shots_used = shots_used;
    e.method = method;
    e.boundary = e.value <= kBoundaryMargin || e.value >= 1.0 - kBoundaryMargin;
    return e;
}

}  // namespace tddens
