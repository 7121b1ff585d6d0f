// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tritterlab {

struct NelderMeadOptions {
    int max_evaluations = 20000;
    /// Stop when f_worst - f_best <= f_tolerance * (|f_best| + f_floor) ...
    double f_tolerance = 1e-13;
    double f_floor = 1e-30;
    /// ... or once the simplex fits in a box of this half-width.
    double x_tolerance = 1e-10;
    /// Per-coordinate initial simplex offsets; empty means 5% of |x0| (or 0.00025 at zero).
    std::vector<double> initial_step;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Unconstrained downhill simplex (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// The returned point is never worse than @p x0.
[[nodiscard]] NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                                           const NelderMeadOptions& options = {});

}  // namespace tritterlab
