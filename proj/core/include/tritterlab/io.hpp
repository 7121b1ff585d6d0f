// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief File formats: transfer matrices (JSON), visibility and singles tables
 *        (CSV), output distributions (JSON/CSV).
 *
 * Matrix JSON accepts
 *   [[[re, im], ...], ...]                                   rows of complex pairs
 *   {"form": "cartesian", "rows": [[[re, im], ...], ...]}
 *   {"form": "polar", "moduli": [[...]], "phases": [[...]]}  phases in radians
 * Any extra keys (for example "note") are ignored.
 *
 * CSV readers skip blank lines, lines starting with '#', and a header line whose
 * first field is not a number. Indices are 1-based in files.
 */

#pragma once

#include <tritterlab/fock.hpp>
#include <tritterlab/reconstruction.hpp>

#include <filesystem>
#include <string>

namespace tritterlab {

class FileNotFoundError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

[[nodiscard]] TransferMatrix parse_matrix_json(const std::string& text);
[[nodiscard]] TransferMatrix load_matrix(const std::filesystem::path& path);
/// Rows of [re, im] pairs.
[[nodiscard]] std::string matrix_to_json(const TransferMatrix& u);

/// Columns i,j,k,l,visibility,sigma; an empty visibility field means undefined.
[[nodiscard]] VisibilityMatrix parse_visibilities_csv(const std::string& text, int dim = 3);
[[nodiscard]] VisibilityMatrix load_visibilities(const std::filesystem::path& path, int dim = 3);
[[nodiscard]] std::string visibilities_to_csv(const VisibilityMatrix& v);

/// Columns i,j,count.
[[nodiscard]] SinglesCounts parse_singles_csv(const std::string& text);
[[nodiscard]] SinglesCounts load_singles(const std::filesystem::path& path);

/// {"n": N, "norm_deficit": d, "outcomes": [{"occ": [...], "p": ...}, ...]}
[[nodiscard]] std::string distribution_to_json(const OutcomeDistribution& dist);
/// Header occ1,...,occN,p then one row per outcome.
[[nodiscard]] std::string distribution_to_csv(const OutcomeDistribution& dist, int dim);

/// printf-style "%.12g".
[[nodiscard]] std::string format_number(double value);

}  // namespace tritterlab
