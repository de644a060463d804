#pragma once

#include <optional>
#include <vector>

#include "sffcc/bitvec.hpp"

namespace sffcc {

// Row-major GF(2) matrix with bitset rows. Columns keep a fixed global
// order; reduction is plain Gaussian elimination with partial pivoting
// by column index.
class Gf2Matrix {
  public:
    Gf2Matrix() = default;
    Gf2Matrix(size_t rows, size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

    size_t row_count() const { return rows_.size(); }
    size_t col_count() const { return cols_; }

    BitVec &row(size_t r) { return rows_[r]; }
    const BitVec &row(size_t r) const { return rows_[r]; }

    void add_row(const BitVec &r) { rows_.push_back(r); }

    // In-place reduced row echelon form; returns pivot columns in order.
    std::vector<size_t> rref();

    size_t rank() const;

    // Is v in the row span? (Non-destructive.)
    bool in_row_span(const BitVec &v) const;

    // Solve x^T * M = v for x (combination of rows equal to v).
    std::optional<BitVec> solve_row_combination(const BitVec &v) const;

    // Basis of { x : x^T * M = 0 }.
    std::vector<BitVec> left_kernel() const;

  private:
    size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

} // namespace sffcc
