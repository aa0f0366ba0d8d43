#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "wtpolar/errors.hpp"

namespace wtpolar {

using Bits = std::vector<uint8_t>;

inline Bits xor_bits(const Bits& a, const Bits& b) {
    if (a.size() != b.size())
        throw ValidationError("xor_bits: length mismatch " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    Bits out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

inline Bits concat_bits(const Bits& a, const Bits& b) {
    Bits out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline uint64_t bits_to_u64(const Bits& b) {
    uint64_t v = 0;
    for (size_t i = 0; i < b.size(); ++i) v |= static_cast<uint64_t>(b[i] & 1) << i;
    return v;
}

// Sorted set of indices into [0, n). All named index sets of the scheme are
// kept in this form; segment contents are always read and written in
// ascending index order.
class IndexSet {
public:
    IndexSet() = default;
    explicit IndexSet(std::vector<int32_t> sorted) : idx_(std::move(sorted)) {
        std::sort(idx_.begin(), idx_.end());
        idx_.erase(std::unique(idx_.begin(), idx_.end()), idx_.end());
    }

    static IndexSet range(int n) {
        std::vector<int32_t> v(n);
        for (int i = 0; i < n; ++i) v[i] = i;
        return IndexSet(std::move(v));
    }

    int size() const { return static_cast<int>(idx_.size()); }
    bool empty() const { return idx_.empty(); }
    int32_t operator[](int i) const { return idx_[static_cast<size_t>(i)]; }
    const std::vector<int32_t>& indices() const { return idx_; }
    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }

    bool contains(int32_t j) const {
        return std::binary_search(idx_.begin(), idx_.end(), j);
    }

    IndexSet set_union(const IndexSet& o) const {
        std::vector<int32_t> out;
        out.reserve(idx_.size() + o.idx_.size());
        std::set_union(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                       std::back_inserter(out));
        IndexSet r;
        r.idx_ = std::move(out);
        return r;
    }

    IndexSet set_intersect(const IndexSet& o) const {
        std::vector<int32_t> out;
        std::set_intersection(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                              std::back_inserter(out));
        IndexSet r;
        r.idx_ = std::move(out);
        return r;
    }

    IndexSet set_minus(const IndexSet& o) const {
        std::vector<int32_t> out;
        std::set_difference(idx_.begin(), idx_.end(), o.idx_.begin(), o.idx_.end(),
                            std::back_inserter(out));
        IndexSet r;
        r.idx_ = std::move(out);
        return r;
    }

    IndexSet complement(int n) const { return range(n).set_minus(*this); }

    bool disjoint(const IndexSet& o) const { return set_intersect(o).empty(); }

    // Contiguous run of the sorted index list.
    IndexSet sub_range(int from, int len) const {
        if (from < 0 || len < 0 || from + len > size())
            throw ValidationError("IndexSet::sub_range out of bounds");
        IndexSet r;
        r.idx_.assign(idx_.begin() + from, idx_.begin() + from + len);
        return r;
    }

    // Lowest-index-first subset of the given size.
    IndexSet take_front(int k) const {
        if (k < 0 || k > size())
            throw InfeasiblePlan("take_front: requested " + std::to_string(k) + " of " +
                                 std::to_string(size()));
        IndexSet r;
        r.idx_.assign(idx_.begin(), idx_.begin() + k);
        return r;
    }

    bool operator==(const IndexSet& o) const { return idx_ == o.idx_; }

private:
    std::vector<int32_t> idx_;
};

inline Bits read_bits(const Bits& word, const IndexSet& at) {
    Bits out(static_cast<size_t>(at.size()));
    for (int i = 0; i < at.size(); ++i) out[static_cast<size_t>(i)] = word[static_cast<size_t>(at[i])];
    return out;
}

inline void write_bits(Bits& word, const IndexSet& at, const Bits& values) {
    if (values.size() != static_cast<size_t>(at.size()))
        throw ValidationError("write_bits: segment length mismatch");
    for (int i = 0; i < at.size(); ++i) word[static_cast<size_t>(at[i])] = values[static_cast<size_t>(i)];
}

// Contiguous slice of a segment in its ascending-index order.
inline Bits slice_bits(const Bits& seg, int from, int len) {
    if (from < 0 || len < 0 || from + len > static_cast<int>(seg.size()))
        throw ValidationError("slice_bits: out of range");
    return Bits(seg.begin() + from, seg.begin() + from + len);
}

}  // namespace wtpolar
