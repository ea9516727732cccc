// Copyright 2026 The qidt Authors
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

// Shared random inputs for the test binaries.
#pragma once

#include "qidt/disturbance.hpp"
#include "qidt/measurement.hpp"

namespace qidt::testing {

/// Random instrument with `terms` Kraus operators per branch: A_bi = V_bi sqrt(F_b).
inline Instrument random_instrument(int d, int outcomes, int terms, Rng& rng) {
    const Povm povm = random_povm(d, outcomes, rng);
    std::vector<Matrix> iso;
    for (int b = 0; b < outcomes; ++b) iso.push_back(random_isometry(terms * d, d, rng));
    return compatible_instrument(povm, iso);
}

inline Matrix dephase(const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (Eigen::Index i = 0; i < rho.rows(); ++i) out(i, i) = rho(i, i);
    return out;
}

}  // namespace qidt::testing
