#include "ncsphere/tensor.hpp"

#include <numeric>

#include "ncsphere/error.hpp"

namespace ncs {

namespace {

std::uint64_t checked_power(int base, int exp) {
    std::uint64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(base))
            throw SizeError("tensor index space too large");
        r *= static_cast<std::uint64_t>(base);
    }
    return r;
}

void require_even(const Partition& p) {
    for (int s : p.block_sizes())
        if (s % 2) throw ClassError("twisted maps need even blocks: " + p.to_string());
}

}  // namespace

SparseTensorMap::SparseTensorMap(int n, int input_arity, int output_arity)
    : n_(n), k_(input_arity), l_(output_arity) {
    if (n < 1) throw DomainError("N must be at least 1");
    checked_power(n, input_arity + output_arity);
}

std::uint64_t SparseTensorMap::encode(const IndexTuple& out, const IndexTuple& in) const {
    if (static_cast<int>(out.size()) != l_ || static_cast<int>(in.size()) != k_)
        throw FrameError("tuple arity does not match map");
    std::uint64_t key = 0;
    for (int v : out) key = key * n_ + static_cast<std::uint64_t>(v);
    for (int v : in) key = key * n_ + static_cast<std::uint64_t>(v);
    return key;
}

std::pair<IndexTuple, IndexTuple> SparseTensorMap::decode(std::uint64_t key) const {
    IndexTuple out(l_), in(k_);
    for (int i = k_ - 1; i >= 0; --i) {
        in[i] = static_cast<int>(key % n_);
        key /= n_;
    }
    for (int i = l_ - 1; i >= 0; --i) {
        out[i] = static_cast<int>(key % n_);
        key /= n_;
    }
    return {std::move(out), std::move(in)};
}

long long SparseTensorMap::at(const IndexTuple& out, const IndexTuple& in) const {
    auto it = entries_.find(encode(out, in));
    return it == entries_.end() ? 0 : it->second;
}

void SparseTensorMap::add(const IndexTuple& out, const IndexTuple& in, long long coeff) {
    if (coeff == 0) return;
    const auto key = encode(out, in);
    auto [it, inserted] = entries_.emplace(key, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) entries_.erase(it);
    }
}

SparseTensorMap SparseTensorMap::transpose() const {
    SparseTensorMap t(n_, l_, k_);
    for (const auto& [key, c] : entries_) {
        auto [out, in] = decode(key);
        t.entries_.emplace(t.encode(in, out), c);
    }
    return t;
}

SparseTensorMap SparseTensorMap::scaled(long long factor) const {
    SparseTensorMap t(n_, k_, l_);
    if (factor == 0) return t;
    for (const auto& [key, c] : entries_) t.entries_.emplace(key, c * factor);
    return t;
}

FixedVector::FixedVector(SparseTensorMap m) : map_(std::move(m)) {
    if (map_.input_arity() != 0) throw FrameError("fixed vector with input legs");
}

int delta(const Partition& p, const IndexTuple& t, bool twisted) {
    if (!is_constant_on_blocks(p, t)) return 0;
    if (!twisted) return 1;
    return signature(kernel(t, p.upper(), p.lower()));
}

SparseTensorMap t_map(const Partition& p, int N, bool twisted) {
    if (twisted) require_even(p);
    SparseTensorMap m(N, p.upper(), p.lower());
    const int k = p.upper();
    IndexTuple in(k), out(p.lower());
    for_each_block_constant(p, N, [&](const IndexTuple& t) {
        std::copy(t.begin(), t.begin() + k, in.begin());
        std::copy(t.begin() + k, t.end(), out.begin());
        m.add(out, in, twisted ? signature(kernel(t, p.upper(), p.lower())) : 1);
    });
    return m;
}

FixedVector xi_vector(const Partition& p, int N, bool twisted) {
    if (p.upper() != 0) throw FrameError("fixed vectors need partitions without upper legs");
    return FixedVector(t_map(p, N, twisted));
}

long long inner_product(const FixedVector& v, const FixedVector& w) {
    if (v.N() != w.N() || v.arity() != w.arity()) throw FrameError("inner product of different frames");
    long long s = 0;
    const auto& a = v.map().entries();
    const auto& b = w.map().entries();
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first)
            ++i;
        else if (j->first < i->first)
            ++j;
        else
            s += (i++)->second * (j++)->second;
    }
    return s;
}

Partition tensor_concat(const Partition& p, const Partition& q) {
    const int k = p.upper() + q.upper();
    const int l = p.lower() + q.lower();
    std::vector<int> labels(k + l);
    ColorWord colors(k + l);
    const int off = p.block_count();
    auto place = [&](int src_leg, const Partition& r, int dst_leg, int shift) {
        labels[dst_leg] = r.label(src_leg) + shift;
        colors[dst_leg] = r.color(src_leg);
    };
    for (int i = 0; i < p.upper(); ++i) place(i, p, i, 0);
    for (int i = 0; i < q.upper(); ++i) place(i, q, p.upper() + i, off);
    for (int i = 0; i < p.lower(); ++i) place(p.upper() + i, p, k + i, 0);
    for (int i = 0; i < q.lower(); ++i) place(q.upper() + i, q, k + p.lower() + i, off);
    if (p.colored() != q.colored() && p.legs() && q.legs())
        throw FrameError("concatenating colored and uncolored partitions");
    if (!p.colored() && !q.colored()) colors.clear();
    return Partition(k, l, std::move(labels), std::move(colors));
}

Composition compose(const Partition& p, const Partition& q) {
    const int k = p.upper(), l = p.lower(), m = q.lower();
    if (q.upper() != l) throw FrameError("composition with mismatched middle row");
    if (p.colored() && q.colored()) {
        for (int i = 0; i < l; ++i)
            if (p.color(k + i) != q.color(i)) throw FrameError("composition with mismatched colors");
    } else if ((p.colored() || q.colored()) && l > 0) {
        throw FrameError("composing colored and uncolored partitions");
    }
    // Nodes: p's legs 0..k+l-1, then q's legs offset by k+l.
    const int off = k + l;
    std::vector<int> parent(k + l + l + m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    auto link_blocks = [&](const Partition& r, int shift) {
        std::vector<int> rep(r.block_count(), -1);
        for (int leg = 0; leg < r.legs(); ++leg) {
            int& x = rep[r.label(leg)];
            if (x < 0)
                x = leg + shift;
            else
                unite(leg + shift, x);
        }
    };
    link_blocks(p, 0);
    link_blocks(q, off);
    for (int i = 0; i < l; ++i) unite(k + i, off + i);

    std::vector<int> labels;
    ColorWord colors;
    std::vector<char> outer_root(parent.size(), 0);
    for (int i = 0; i < k; ++i) {
        labels.push_back(find(i));
        colors.push_back(p.color(i));
        outer_root[find(i)] = 1;
    }
    for (int i = 0; i < m; ++i) {
        labels.push_back(find(off + l + i));
        colors.push_back(q.color(l + i));
        outer_root[find(off + l + i)] = 1;
    }
    std::vector<char> counted(parent.size(), 0);
    int loops = 0;
    for (int i = 0; i < l; ++i) {
        const int r = find(k + i);
        if (!outer_root[r] && !counted[r]) {
            counted[r] = 1;
            ++loops;
        }
    }
    const bool colored = (k > 0 && p.colored()) || (m > 0 && q.colored());
    if (!colored) colors.clear();
    return {Partition(k, m, std::move(labels), std::move(colors)), loops};
}

Partition involution(const Partition& p) {
    std::vector<int> labels;
    ColorWord colors;
    for (int leg = p.upper(); leg < p.legs(); ++leg) {
        labels.push_back(p.label(leg));
        colors.push_back(p.color(leg));
    }
    for (int leg = 0; leg < p.upper(); ++leg) {
        labels.push_back(p.label(leg));
        colors.push_back(p.color(leg));
    }
    return Partition(p.lower(), p.upper(), std::move(labels), std::move(colors));
}

SparseTensorMap multiply(const SparseTensorMap& q_map, const SparseTensorMap& p_map) {
    if (q_map.N() != p_map.N() || q_map.input_arity() != p_map.output_arity())
        throw FrameError("multiplying maps on different frames");
    SparseTensorMap r(p_map.N(), p_map.input_arity(), q_map.output_arity());
    // Group q's entries by input tuple.
    std::map<IndexTuple, std::vector<std::pair<IndexTuple, long long>>> by_input;
    for (const auto& [key, c] : q_map.entries()) {
        auto [out, in] = q_map.decode(key);
        by_input[in].emplace_back(std::move(out), c);
    }
    for (const auto& [key, c] : p_map.entries()) {
        auto [mid, in] = p_map.decode(key);
        auto it = by_input.find(mid);
        if (it == by_input.end()) continue;
        for (const auto& [out, d] : it->second) r.add(out, in, c * d);
    }
    return r;
}

SparseTensorMap kronecker(const SparseTensorMap& a, const SparseTensorMap& b) {
    if (a.N() != b.N()) throw FrameError("kronecker of maps with different N");
    SparseTensorMap r(a.N(), a.input_arity() + b.input_arity(), a.output_arity() + b.output_arity());
    for (const auto& [ka, ca] : a.entries()) {
        auto [oa, ia] = a.decode(ka);
        for (const auto& [kb, cb] : b.entries()) {
            auto [ob, ib] = b.decode(kb);
            IndexTuple out = oa, in = ia;
            out.insert(out.end(), ob.begin(), ob.end());
            in.insert(in.end(), ib.begin(), ib.end());
            r.add(out, in, ca * cb);
        }
    }
    return r;
}

}  // namespace ncs
