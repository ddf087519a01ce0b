#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace luci {

// Dense GF(2) vector.
struct BitVec {
    size_t nbits = 0;
    std::vector<uint64_t> w;

    BitVec() = default;
    explicit BitVec(size_t n) : nbits(n), w((n + 63) / 64, 0) {}
    bool get(size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v = true) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w[i >> 6] |= m;
        else
            w[i >> 6] &= ~m;
    }
    void flip(size_t i) { w[i >> 6] ^= uint64_t(1) << (i & 63); }
    void operator^=(const BitVec& o) {
        for (size_t i = 0; i < w.size(); i++) w[i] ^= o.w[i];
    }
    bool any() const {
        for (uint64_t x : w)
            if (x) return true;
        return false;
    }
    size_t popcount() const {
        size_t n = 0;
        for (uint64_t x : w) n += static_cast<size_t>(__builtin_popcountll(x));
        return n;
    }
    bool odd_and(const BitVec& o) const {
        uint64_t acc = 0;
        for (size_t i = 0; i < w.size(); i++) acc ^= w[i] & o.w[i];
        return __builtin_popcountll(acc) & 1;
    }
    bool operator==(const BitVec& o) const { return nbits == o.nbits && w == o.w; }
};

// Incremental row basis in row-echelon form; supports membership tests and
// expressing vectors as combinations of inserted rows.
class Gf2Basis {
  public:
    explicit Gf2Basis(size_t nbits) : nbits_(nbits) {}

    // Reduce v by the basis; returns the residual.
    BitVec reduce(BitVec v) const {
        for (size_t k = 0; k < rows_.size(); k++)
            if (v.get(pivots_[k])) v ^= rows_[k];
        return v;
    }
    bool contains(const BitVec& v) const { return !reduce(v).any(); }
    // Insert v if independent; returns true if rank grew.
    bool insert(const BitVec& v) {
        BitVec r = reduce(v);
        if (!r.any()) return false;
        size_t p = 0;
        while (!r.get(p)) p++;
        rows_.push_back(r);
        pivots_.push_back(p);
        return true;
    }
    size_t rank() const { return rows_.size(); }
    size_t nbits() const { return nbits_; }

  private:
    size_t nbits_;
    std::vector<BitVec> rows_;
    std::vector<size_t> pivots_;
};

}  // namespace luci
