#include "zsf/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "zsf/error.hpp"

namespace zsf {

namespace fs = std::filesystem;

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return columns[i];
    }
    throw DataError("CSV has no column '" + name + "'");
}

std::string format_csv(const CsvTable& table) {
    if (table.header.size() != table.columns.size()) {
        throw ConfigError("CSV header and column count differ");
    }
    const std::size_t rows = table.rows();
    for (const auto& col : table.columns) {
        if (col.size() != rows) throw ConfigError("CSV columns have different lengths");
    }
    std::string out;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (j) out += ',';
        out += table.header[j];
    }
    out += '\n';
    char buf[32];
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < table.columns.size(); ++j) {
            if (j) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", table.columns[j][i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = s.find(',', start);
            cells.push_back(s.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return cells;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            table.columns.resize(table.header.size());
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields");
        }
        for (std::size_t j = 0; j < cells.size(); ++j) {
            double v = 0.0;
            const char* b = cells[j].data();
            const char* e = b + cells[j].size();
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec != std::errc() || p != e) {
                throw DataError(source + ":" + std::to_string(line_no) + ": bad number '" +
                                cells[j] + "'");
            }
            table.columns[j].push_back(v);
        }
    }
    if (table.header.empty()) throw DataError(source + ": empty CSV");
    return table;
}

CsvTable read_csv(const fs::path& path) { return parse_csv(read_file(path), path.string()); }

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(const std::string& data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw Error("SHA-256 computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

CsvTable potential_table(const SampledPotential& v, const std::string& value_name) {
    const auto xs = v.grid().abscissae();
    const auto vs = v.values();
    return {{"x", value_name}, {{xs.begin(), xs.end()}, {vs.begin(), vs.end()}}};
}

SampledPotential potential_from_table(const CsvTable& table, const std::string& value_name) {
    const auto& x = table.column("x");
    const auto& v = table.column(value_name);
    if (x.size() < 3 || x.size() % 2 == 0) {
        throw DataError("potential CSV needs an odd number (>= 3) of rows");
    }
    const double x_max = x.back();
    Grid grid(x_max, x.size());
    const double tol = 1e-9 * x_max;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (std::abs(x[i] - grid.x(i)) > tol) {
            throw DataError("potential CSV abscissae are not a uniform symmetric grid (row " +
                            std::to_string(i + 2) + ")");
        }
    }
    return SampledPotential(grid, v);
}

SampledPotential read_potential(const fs::path& path, const std::string& value_name) {
    try {
        return potential_from_table(read_csv(path), value_name);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace zsf
