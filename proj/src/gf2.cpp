#include "sffcc/gf2.hpp"

namespace sffcc {

std::vector<size_t> Gf2Matrix::rref() {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_.size(); ++c) {
        size_t pivot = r;
        while (pivot < rows_.size() && !rows_[pivot].get(c)) ++pivot;
        if (pivot == rows_.size()) continue;
        std::swap(rows_[r], rows_[pivot]);
        for (size_t i = 0; i < rows_.size(); ++i)
            if (i != r && rows_[i].get(c)) rows_[i].xor_with(rows_[r]);
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

size_t Gf2Matrix::rank() const {
    Gf2Matrix copy = *this;
    return copy.rref().size();
}

bool Gf2Matrix::in_row_span(const BitVec &v) const {
    Gf2Matrix copy = *this;
    auto pivots = copy.rref();
    BitVec residual = v;
    for (size_t r = 0; r < pivots.size(); ++r)
        if (residual.get(pivots[r])) residual.xor_with(copy.rows_[r]);
    return residual.none();
}

std::optional<BitVec> Gf2Matrix::solve_row_combination(const BitVec &v) const {
    // Augment each row with an identity tag so the reduction tracks which
    // original rows combine into each echelon row.
    size_t n = rows_.size();
    Gf2Matrix aug(n, cols_ + n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t c = 0; c < cols_; ++c)
            if (rows_[i].get(c)) aug.rows_[i].set(c, true);
        aug.rows_[i].set(cols_ + i, true);
    }
    // Eliminate only over the first cols_ columns.
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < n; ++c) {
        size_t pivot = r;
        while (pivot < n && !aug.rows_[pivot].get(c)) ++pivot;
        if (pivot == n) continue;
        std::swap(aug.rows_[r], aug.rows_[pivot]);
        for (size_t i = 0; i < n; ++i)
            if (i != r && aug.rows_[i].get(c)) aug.rows_[i].xor_with(aug.rows_[r]);
        pivots.push_back(c);
        ++r;
    }
    BitVec residual = v;
    BitVec combo(n);
    for (size_t i = 0; i < pivots.size(); ++i) {
        if (residual.get(pivots[i])) {
            for (size_t c = 0; c < cols_; ++c)
                if (aug.rows_[i].get(c)) residual.flip(c);
            for (size_t t = 0; t < n; ++t)
                if (aug.rows_[i].get(cols_ + t)) combo.flip(t);
        }
    }
    if (!residual.none()) return std::nullopt;
    return combo;
}

std::vector<BitVec> Gf2Matrix::left_kernel() const {
    size_t n = rows_.size();
    Gf2Matrix aug(n, cols_ + n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t c = 0; c < cols_; ++c)
            if (rows_[i].get(c)) aug.rows_[i].set(c, true);
        aug.rows_[i].set(cols_ + i, true);
    }
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < n; ++c) {
        size_t pivot = r;
        while (pivot < n && !aug.rows_[pivot].get(c)) ++pivot;
        if (pivot == n) continue;
        std::swap(aug.rows_[r], aug.rows_[pivot]);
        for (size_t i = 0; i < n; ++i)
            if (i != r && aug.rows_[i].get(c)) aug.rows_[i].xor_with(aug.rows_[r]);
        ++r;
    }
    std::vector<BitVec> kernel;
    for (size_t i = r; i < n; ++i) {
        BitVec combo(n);
        for (size_t t = 0; t < n; ++t)
            if (aug.rows_[i].get(cols_ + t)) combo.set(t, true);
        kernel.push_back(std::move(combo));
    }
    return kernel;
}

} // namespace sffcc
