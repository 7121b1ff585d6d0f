// Copyright 2026 The tritterlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <tritterlab/io.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tritterlab {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(text, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == text.size();
}

bool parse_int(const std::string& text, int& out) {
    double v = 0.0;
    if (!parse_double(text, v) || v != static_cast<int>(v)) return false;
    out = static_cast<int>(v);
    return true;
}

// Data rows of a CSV table, each with its 1-based line number.
std::vector<std::pair<int, std::vector<std::string>>> csv_rows(const std::string& text) {
    std::vector<std::pair<int, std::vector<std::string>>> rows;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto fields = split_fields(t);
        double probe = 0.0;
        if (header_allowed && !parse_double(fields.front(), probe)) {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        rows.emplace_back(number, std::move(fields));
    }
    return rows;
}

[[noreturn]] void row_error(int line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

ComplexMatrix matrix_from_rows(const json& rows) {
    if (!rows.is_array() || rows.empty()) throw ParseError("matrix rows must be a non-empty array");
    const auto n = static_cast<Eigen::Index>(rows.size());
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ParseError("matrix must be square");
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& cell = row[static_cast<std::size_t>(j)];
            if (cell.is_number()) {
                m(i, j) = Complex{cell.get<double>(), 0.0};
            } else if (cell.is_array() && cell.size() == 2 && cell[0].is_number() && cell[1].is_number()) {
                m(i, j) = Complex{cell[0].get<double>(), cell[1].get<double>()};
            } else {
                throw ParseError("matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

RealMatrix real_table(const json& rows, const char* name) {
    if (!rows.is_array() || rows.empty()) throw ParseError(std::string(name) + " must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw ParseError(std::string(name) + " must be square");
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!row[static_cast<std::size_t>(j)].is_number()) throw ParseError(std::string(name) + " entries must be numbers");
            m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
        }
    }
    return m;
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw FileNotFoundError("no such file: " + path.string());
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFoundError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

TransferMatrix parse_matrix_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (doc.is_array()) return TransferMatrix(matrix_from_rows(doc));
        if (!doc.is_object()) throw ParseError("matrix file must hold an array or an object");
        const std::string form = doc.value("form", "cartesian");
        if (form == "cartesian") {
            if (!doc.contains("rows")) throw ParseError("cartesian matrix needs \"rows\"");
            return TransferMatrix(matrix_from_rows(doc["rows"]));
        }
        if (form == "polar") {
            if (!doc.contains("moduli") || !doc.contains("phases")) throw ParseError("polar matrix needs \"moduli\" and \"phases\"");
            const RealMatrix mod = real_table(doc["moduli"], "moduli");
            const RealMatrix phase = real_table(doc["phases"], "phases");
            if (mod.rows() != phase.rows()) throw ParseError("moduli and phases differ in size");
            ComplexMatrix m(mod.rows(), mod.cols());
            for (Eigen::Index i = 0; i < mod.rows(); ++i) {
                for (Eigen::Index j = 0; j < mod.cols(); ++j) m(i, j) = std::polar(mod(i, j), phase(i, j));
            }
            return TransferMatrix(std::move(m));
        }
        throw ParseError("unknown matrix form '" + form + "'");
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed matrix: ") + e.what());
    } catch (const DimensionError& e) {
        throw ParseError(e.what());
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

TransferMatrix load_matrix(const std::filesystem::path& path) {
    try {
        return parse_matrix_json(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string matrix_to_json(const TransferMatrix& u) {
    json rows = json::array();
    for (int i = 0; i < u.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < u.dim(); ++j) row.push_back({u(i, j).real(), u(i, j).imag()});
        rows.push_back(row);
    }
    return rows.dump() + "\n";
}

VisibilityMatrix parse_visibilities_csv(const std::string& text, int dim) {
    VisibilityMatrix v(dim);
    for (const auto& [line, f] : csv_rows(text)) {
        if (f.size() < 5 || f.size() > 6) row_error(line, "expected i,j,k,l,visibility[,sigma]");
        int idx[4];
        for (int n = 0; n < 4; ++n) {
            if (!parse_int(f[static_cast<std::size_t>(n)], idx[n])) row_error(line, "bad port index '" + f[static_cast<std::size_t>(n)] + "'");
            if (idx[n] < 1 || idx[n] > dim) row_error(line, "port index out of range");
        }
        std::optional<double> value;
        double parsed = 0.0;
        if (!f[4].empty()) {
            if (!parse_double(f[4], parsed)) row_error(line, "bad visibility '" + f[4] + "'");
            value = parsed;
        }
        double sigma = 0.0;
        if (f.size() == 6 && !f[5].empty()) {
            if (!parse_double(f[5], sigma) || sigma < 0.0) row_error(line, "bad sigma '" + f[5] + "'");
        }
        try {
            v.set(idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1, value, sigma);
        } catch (const Error& e) {
            row_error(line, e.what());
        }
    }
    return v;
}

VisibilityMatrix load_visibilities(const std::filesystem::path& path, int dim) {
    try {
        return parse_visibilities_csv(read_text_file(path), dim);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string visibilities_to_csv(const VisibilityMatrix& v) {
    std::string out = "i,j,k,l,visibility,sigma\n";
    for (const auto& e : v.entries()) {
        out += std::to_string(e.inputs.first + 1) + ',' + std::to_string(e.inputs.second + 1) + ',' +
               std::to_string(e.outputs.first + 1) + ',' + std::to_string(e.outputs.second + 1) + ',' +
               (e.value ? format_number(*e.value) : std::string{}) + ',' + format_number(e.sigma) + '\n';
    }
    return out;
}

SinglesCounts parse_singles_csv(const std::string& text) {
    SinglesCounts c;
    c.counts = RealMatrix::Zero(3, 3);
    Eigen::Matrix<bool, 3, 3> seen = Eigen::Matrix<bool, 3, 3>::Constant(false);
    for (const auto& [line, f] : csv_rows(text)) {
        if (f.size() != 3) row_error(line, "expected i,j,count");
        int i = 0, j = 0;
        double count = 0.0;
        if (!parse_int(f[0], i) || !parse_int(f[1], j)) row_error(line, "bad port index");
        if (i < 1 || i > 3 || j < 1 || j > 3) row_error(line, "port index out of range");
        if (!parse_double(f[2], count) || count < 0.0) row_error(line, "bad count '" + f[2] + "'");
        c.counts(i - 1, j - 1) = count;
        seen(i - 1, j - 1) = true;
    }
    if (!seen.all()) throw ParseError("singles table must list all nine input/output combinations");
    return c;
}

SinglesCounts load_singles(const std::filesystem::path& path) {
    try {
        return parse_singles_csv(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string distribution_to_json(const OutcomeDistribution& dist) {
    json outcomes = json::array();
    for (const auto& e : dist) outcomes.push_back({{"occ", e.outcome.occupations()}, {"p", e.probability}});
    json doc{{"n", dist.total_photons()}, {"norm_deficit", dist.norm_deficit()}, {"outcomes", outcomes}};
    return doc.dump(2) + "\n";
}

std::string distribution_to_csv(const OutcomeDistribution& dist, int dim) {
    std::string out;
    for (int m = 1; m <= dim; ++m) out += "occ" + std::to_string(m) + ',';
    out += "p\n";
    for (const auto& e : dist) {
        for (int n : e.outcome.occupations()) out += std::to_string(n) + ',';
        out += format_number(e.probability) + '\n';
    }
    return out;
}

}  // namespace tritterlab
