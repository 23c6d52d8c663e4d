#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ncsphere/partition.hpp"

namespace ncs {

// Integer linear map (C^N)^{⊗k} -> (C^N)^{⊗l}. Entries are keyed by the
// mixed-radix code of the output tuple followed by the input tuple, so key
// order is lexicographic tuple order. Indices are 0-based.
class SparseTensorMap {
public:
    SparseTensorMap() = default;
    SparseTensorMap(int n, int input_arity, int output_arity);

    int N() const { return n_; }
    int input_arity() const { return k_; }
    int output_arity() const { return l_; }
    std::size_t size() const { return entries_.size(); }
    const std::map<std::uint64_t, long long>& entries() const { return entries_; }

    long long at(const IndexTuple& out, const IndexTuple& in) const;
    void add(const IndexTuple& out, const IndexTuple& in, long long coeff);

    std::uint64_t encode(const IndexTuple& out, const IndexTuple& in) const;
    std::pair<IndexTuple, IndexTuple> decode(std::uint64_t key) const;

    SparseTensorMap transpose() const;
    SparseTensorMap scaled(long long factor) const;
    bool operator==(const SparseTensorMap&) const = default;

private:
    int n_ = 1;
    int k_ = 0;
    int l_ = 0;
    std::map<std::uint64_t, long long> entries_;
};

// A map with no input legs.
class FixedVector {
public:
    FixedVector() = default;
    explicit FixedVector(SparseTensorMap m);

    int N() const { return map_.N(); }
    int arity() const { return map_.output_arity(); }
    std::size_t size() const { return map_.size(); }
    long long at(const IndexTuple& t) const { return map_.at(t, {}); }
    const SparseTensorMap& map() const { return map_; }

private:
    SparseTensorMap map_;
};

// Signed Kronecker symbol on the combined (upper then lower) tuple.
int delta(const Partition& p, const IndexTuple& t, bool twisted);

SparseTensorMap t_map(const Partition& p, int N, bool twisted);
FixedVector xi_vector(const Partition& p, int N, bool twisted);
long long inner_product(const FixedVector& v, const FixedVector& w);

// Calls f(tuple) for every tuple over [0,N) constant on the blocks of p.
template <class F>
void for_each_block_constant(const Partition& p, int N, F&& f) {
    const int b = p.block_count();
    std::vector<int> value(b, 0);
    IndexTuple t(p.legs());
    while (true) {
        for (int leg = 0; leg < p.legs(); ++leg) t[leg] = value[p.label(leg)];
        f(static_cast<const IndexTuple&>(t));
        int i = b - 1;
        while (i >= 0 && ++value[i] == N) value[i--] = 0;
        if (i < 0) break;
    }
}

Partition tensor_concat(const Partition& p, const Partition& q);

struct Composition {
    Partition partition;
    int loops;
};

// p over (k,l) stacked on top of q over (l,m).
Composition compose(const Partition& p, const Partition& q);
Partition involution(const Partition& p);

// q_map * p_map, the map of "first p, then q".
SparseTensorMap multiply(const SparseTensorMap& q_map, const SparseTensorMap& p_map);
SparseTensorMap kronecker(const SparseTensorMap& a, const SparseTensorMap& b);

}  // namespace ncs
