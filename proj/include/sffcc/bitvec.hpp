#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace sffcc {

// Dense bit vector over GF(2), word-packed. Sized once at construction;
// xor/and combinations require equal lengths.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t n_bits) : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

    size_t size() const { return n_bits_; }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t mask = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    void xor_with(const BitVec &o) {
        for (size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : words_) c += std::popcount(w);
        return c;
    }

    bool none() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    // Parity of the AND with another vector (symplectic-product building block).
    bool and_parity(const BitVec &o) const {
        uint64_t acc = 0;
        for (size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
        return std::popcount(acc) & 1;
    }

    size_t and_popcount(const BitVec &o) const {
        size_t c = 0;
        for (size_t w = 0; w < words_.size(); ++w) c += std::popcount(words_[w] & o.words_[w]);
        return c;
    }

    // Index of the lowest set bit, or size() if empty.
    size_t lowest_set() const {
        for (size_t w = 0; w < words_.size(); ++w)
            if (words_[w]) return (w << 6) + std::countr_zero(words_[w]);
        return n_bits_;
    }

    bool operator==(const BitVec &o) const = default;

    std::string str() const {
        std::string s;
        s.reserve(n_bits_);
        for (size_t i = 0; i < n_bits_; ++i) s.push_back(get(i) ? '1' : '0');
        return s;
    }

    const std::vector<uint64_t> &words() const { return words_; }

  private:
    size_t n_bits_ = 0;
    std::vector<uint64_t> words_;
};

} // namespace sffcc
