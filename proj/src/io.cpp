#include "nykpca/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace nykpca {

namespace {

// strict double parse of a trimmed cell
bool parse_cell(const std::string& cell, double& out) {
    size_t b = cell.find_first_not_of(" \t\r");
    if (b == std::string::npos) return false;
    size_t e = cell.find_last_not_of(" \t\r");
    const char* first = cell.data() + b;
    const char* last = cell.data() + e + 1;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw UsageError("cannot open '" + path + "' for reading");

    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    size_t width = 0;
    bool first = true;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        auto cells = split_commas(line);
        std::vector<double> row(cells.size());
        bool all_numeric = true;
        size_t bad = 0;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (!parse_cell(cells[i], row[i])) {
                all_numeric = false;
                bad = i;
                break;
            }
        }
        if (first) {
            first = false;
            if (!all_numeric) continue;  // header line
        } else if (!all_numeric) {
            throw FormatError("csv '" + path + "': non-numeric cell in column " +
                              std::to_string(bad + 1) + " at line " + std::to_string(line_no));
        }
        for (double v : row)
            if (!std::isfinite(v))
                throw FormatError("csv '" + path + "': non-finite value at line " +
                                  std::to_string(line_no));
        if (rows.empty()) {
            width = row.size();
        } else if (row.size() != width) {
            throw FormatError("csv '" + path + "': expected " + std::to_string(width) +
                              " columns, got " + std::to_string(row.size()) + " at line " +
                              std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("csv '" + path + "': no data rows");

    Dataset data;
    data.x.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j)
            data.x(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return data;
}

void write_csv(const Dataset& data, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw UsageError("cannot open '" + path + "' for writing");
    char buf[40];
    for (Index i = 0; i < data.n(); ++i) {
        for (Index j = 0; j < data.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", data.x(i, j));
            if (j) os << ',';
            os << buf;
        }
        if (data.labels) os << ',' << (*data.labels)[static_cast<size_t>(i)];
        os << '\n';
    }
    if (!os) throw UsageError("failed writing '" + path + "'");
}

namespace {

std::uint32_t read_be32(std::istream& is, const std::string& path, long offset) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    if (!is)
        throw FormatError("idx '" + path + "': truncated header at offset " +
                          std::to_string(offset));
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream imgs(images_path, std::ios::binary);
    if (!imgs) throw UsageError("cannot open '" + images_path + "' for reading");
    const std::uint32_t img_magic = read_be32(imgs, images_path, 0);
    if (img_magic != 0x00000803u) {
        char hex[16];
        std::snprintf(hex, sizeof(hex), "0x%08x", img_magic);
        throw FormatError("idx '" + images_path + "': wrong magic at offset 0: got " + hex +
                          ", expected 0x00000803");
    }
    const std::uint32_t n = read_be32(imgs, images_path, 4);
    const std::uint32_t rows = read_be32(imgs, images_path, 8);
    const std::uint32_t cols = read_be32(imgs, images_path, 12);
    const std::uint64_t pixels = std::uint64_t(n) * rows * cols;

    std::vector<unsigned char> payload(pixels);
    imgs.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(pixels));
    if (static_cast<std::uint64_t>(imgs.gcount()) != pixels)
        throw FormatError("idx '" + images_path + "': truncated payload at offset " +
                          std::to_string(16 + imgs.gcount()));

    std::ifstream lbls(labels_path, std::ios::binary);
    if (!lbls) throw UsageError("cannot open '" + labels_path + "' for reading");
    const std::uint32_t lbl_magic = read_be32(lbls, labels_path, 0);
    if (lbl_magic != 0x00000801u) {
        char hex[16];
        std::snprintf(hex, sizeof(hex), "0x%08x", lbl_magic);
        throw FormatError("idx '" + labels_path + "': wrong magic at offset 0: got " + hex +
                          ", expected 0x00000801");
    }
    const std::uint32_t n_labels = read_be32(lbls, labels_path, 4);
    if (n_labels != n)
        throw FormatError("idx '" + labels_path + "': label count " + std::to_string(n_labels) +
                          " at offset 4 does not match image count " + std::to_string(n));
    std::vector<unsigned char> raw_labels(n);
    lbls.read(reinterpret_cast<char*>(raw_labels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::uint32_t>(lbls.gcount()) != n)
        throw FormatError("idx '" + labels_path + "': truncated payload at offset " +
                          std::to_string(8 + lbls.gcount()));

    if (n == 0 || rows == 0 || cols == 0)
        throw FormatError("idx '" + images_path + "': zero dimension in header");

    Dataset data;
    data.x.resize(static_cast<Index>(n), static_cast<Index>(rows * cols));
    for (std::uint64_t i = 0; i < pixels; ++i)
        data.x.data()[i] = static_cast<double>(payload[i]);  // row-major flattening
    std::vector<int> labels(n);
    for (std::uint32_t i = 0; i < n; ++i) labels[i] = raw_labels[i];
    data.labels = std::move(labels);
    return data;
}

Dataset filter_digit(const Dataset& data, int digit) {
    if (!data.labels) throw UsageError("filter_digit: dataset has no labels");
    std::vector<Index> keep;
    for (Index i = 0; i < data.n(); ++i)
        if ((*data.labels)[static_cast<size_t>(i)] == digit) keep.push_back(i);

    Dataset out;
    out.x.resize(static_cast<Index>(keep.size()), data.dim());
    std::vector<int> labels(keep.size(), digit);
    for (size_t i = 0; i < keep.size(); ++i) out.x.row(static_cast<Index>(i)) = data.x.row(keep[i]);
    out.labels = std::move(labels);
    return out;
}

}  // namespace nykpca
