// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/coupled_mode.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tritterlab {

void CouplerParams::validate() const {
    if (!(coupling_k > 0.0) || !std::isfinite(coupling_k)) throw DomainError("coupling k must be positive and finite");
    if (!std::isfinite(propagation_beta)) throw DomainError("propagation constant must be finite");
    if (!(length_z >= 0.0) || !std::isfinite(length_z)) throw DomainError("length must be non-negative and finite");
}

TransferMatrix tritter_matrix(const CouplerParams& p) {
    p.validate();
    const double kz = p.coupling_k * p.length_z;
    const Complex global = std::polar(1.0, -p.propagation_beta * p.length_z);
    const Complex diag = global * (2.0 * std::polar(1.0, kz) + std::polar(1.0, -2.0 * kz)) / 3.0;
    const Complex off = global * (std::polar(1.0, -2.0 * kz) - std::polar(1.0, kz)) / 3.0;

    ComplexMatrix u(3, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) u(i, j) = (i == j) ? diag : off;
    }
    return TransferMatrix(std::move(u));
}

double two_coupler_reflectivity(double coupling_k, double length) {
    const double kl = coupling_k * length;
    if (!(kl >= 0.0) || !std::isfinite(kl)) throw DomainError("k*L must be non-negative and finite");
    const double s = std::sin(kl);
    return s * s;
}

double balanced_length(double coupling_k) {
    if (!(coupling_k > 0.0) || !std::isfinite(coupling_k)) throw DomainError("coupling k must be positive");
    return 2.0 * std::numbers::pi / (9.0 * coupling_k);
}

CouplingCalibration::CouplingCalibration(std::vector<std::pair<double, double>> spacing_to_k)
    : points_(std::move(spacing_to_k)) {
    if (points_.size() < 2) throw DomainError("calibration needs at least two points");
    std::sort(points_.begin(), points_.end());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(points_[i].second > 0.0)) throw DomainError("calibrated coupling must be positive");
        if (i > 0 && points_[i].first == points_[i - 1].first) throw DomainError("duplicate calibration spacing");
    }
}

double CouplingCalibration::coupling_at(double spacing) const {
    auto upper = std::upper_bound(points_.begin(), points_.end(), spacing,
                                  [](double s, const auto& pt) { return s < pt.first; });
    if (upper == points_.begin()) ++upper;
    if (upper == points_.end()) --upper;
    const auto lower = std::prev(upper);
    const double t = (spacing - lower->first) / (upper->first - lower->first);
    const double log_k = std::log(lower->second) + t * (std::log(upper->second) - std::log(lower->second));
    return std::exp(log_k);
}

}  // namespace tritterlab
