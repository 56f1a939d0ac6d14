#pragma once

#include <string>

#include "nykpca/dataset.hpp"

namespace nykpca {

// Rectangular numeric CSV, comma-separated. A single leading header line is
// auto-detected (any cell of the first line that does not parse as a number
// makes it a header). Ragged rows, non-numeric cells, non-finite values and
// empty files raise FormatError with the offending line number.
Dataset load_csv(const std::string& path);

// Writes rows as plain numeric CSV (17 significant digits, value-exact on
// re-read). When labels are present they go into a final "label" column.
void write_csv(const Dataset& data, const std::string& path);

// IDX image/label pair (the MNIST container format): big-endian magic
// 0x00000803 + counts (n, rows, cols) + unsigned bytes for images, magic
// 0x00000801 + count + bytes for labels. Pixels are flattened row-major into
// an n x (rows*cols) matrix of values in [0, 255]. Wrong magics, truncated
// payloads and count mismatches raise FormatError naming the byte offset.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Rows whose label equals `digit`, order preserved. Requires labels.
Dataset filter_digit(const Dataset& data, int digit);

}  // namespace nykpca
