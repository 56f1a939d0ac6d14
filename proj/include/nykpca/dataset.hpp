#pragma once

#include <optional>
#include <vector>

#include "nykpca/errors.hpp"
#include "nykpca/types.hpp"

namespace nykpca {

// Dense n x d sample matrix, one sample per row, with optional integer labels.
struct Dataset {
    RowMat x;
    std::optional<std::vector<int>> labels;

    Index n() const { return x.rows(); }
    Index dim() const { return x.cols(); }

    // n >= 1, d >= 1, all entries finite, label count (if any) matches n
    void validate() const {
        if (x.rows() < 1 || x.cols() < 1)
            throw UsageError("dataset must have at least one row and one column");
        if (!x.allFinite())
            throw UsageError("dataset contains non-finite entries");
        if (labels && static_cast<Index>(labels->size()) != x.rows())
            throw UsageError("label count does not match sample count");
    }
};

}  // namespace nykpca
