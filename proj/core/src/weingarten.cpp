#include "ncsphere/weingarten.hpp"

#include "ncsphere/error.hpp"
#include "ncsphere/tensor.hpp"

namespace ncs {

namespace {

ColorWord effective_word(const GroupSpec& g, const ColorWord& alpha) {
    if (g.field == Field::real) return real_word(static_cast<int>(alpha.size()));
    for (auto c : alpha)
        if (c == LegColor::uncolored) throw FrameError("complex groups need a colored exponent word");
    return alpha;
}

mpq_class power(int base, int exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(exp));
    return mpq_class(r);
}

}  // namespace

ColorWord real_word(int k) { return ColorWord(k, LegColor::uncolored); }

std::vector<Partition> category_pairings(const GroupSpec& g, const ColorWord& alpha) {
    const ColorWord word = effective_word(g, alpha);
    PartitionClass c = PartitionClass::P2;
    if (g.level == Level::half) c = PartitionClass::P2_star;
    if (g.level == Level::free) c = PartitionClass::NC2;
    return enumerate(c, ColorWord{}, word, std::max<int>(default_max_legs, static_cast<int>(word.size())));
}

ExactMatrix gram(const GroupSpec& g, const ColorWord& alpha, int N) {
    if (N < 1) throw DomainError("N must be at least 1");
    const auto pairings = category_pairings(g, alpha);
    const int n = static_cast<int>(pairings.size());
    ExactMatrix m(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            m(a, b) = power(N, join(pairings[a], pairings[b]).block_count);
            m(b, a) = m(a, b);
        }
    return m;
}

ExactMatrix weingarten_matrix(const GroupSpec& g, const ColorWord& alpha, int N) {
    const ExactMatrix G = gram(g, alpha, N);
    try {
        return inverse(G);
    } catch (const DomainError&) {
        throw SingularError(N, static_cast<int>(alpha.size()));
    }
}

WeingartenTable::WeingartenTable(const GroupSpec& g, const ColorWord& alpha, int N)
    : g_(g), alpha_(effective_word(g, alpha)), n_(N), pairings_(category_pairings(g, alpha)) {
    gram_ = ncs::gram(g, alpha, N);
    try {
        w_ = inverse(gram_);
    } catch (const DomainError&) {
        throw SingularError(N, static_cast<int>(alpha.size()));
    }
}

std::vector<int> WeingartenTable::deltas(const IndexTuple& t) const {
    if (t.size() != alpha_.size()) throw FrameError("index tuple length does not match exponent word");
    std::vector<int> out;
    out.reserve(pairings_.size());
    for (const auto& p : pairings_) out.push_back(delta(p, t, g_.twisted));
    return out;
}

mpq_class WeingartenTable::moment(const IndexTuple& i, const IndexTuple& j) const {
    for (int v : i)
        if (v < 0 || v >= n_) throw DomainError("row index out of range");
    for (int v : j)
        if (v < 0 || v >= n_) throw DomainError("column index out of range");
    const auto di = deltas(i);
    const auto dj = deltas(j);
    mpq_class s = 0;
    for (std::size_t a = 0; a < di.size(); ++a) {
        if (!di[a]) continue;
        for (std::size_t b = 0; b < dj.size(); ++b) {
            if (!dj[b]) continue;
            const mpq_class& w = w_(static_cast<int>(a), static_cast<int>(b));
            if (di[a] * dj[b] > 0)
                s += w;
            else
                s -= w;
        }
    }
    return s;
}

mpq_class moment(const GroupSpec& g, int N, const IndexTuple& i, const IndexTuple& j,
                 const ColorWord& alpha) {
    if (i.size() != alpha.size() || j.size() != alpha.size())
        throw FrameError("moment needs |i| = |j| = |alpha|");
    if (category_pairings(g, alpha).empty()) return 0;
    return WeingartenTable(g, alpha, N).moment(i, j);
}

mpq_class sphere_trace(const SphereSpec& s, int N, const IndexTuple& i, const ColorWord& alpha) {
    return moment(s, N, IndexTuple(i.size(), 0), i, alpha);
}

int gram_rank_products(const SphereSpec& s, int N, bool conjugated) {
    if (N < 2) throw DomainError("rank of products needs N >= 2");
    ColorWord alpha;
    if (s.field == Field::real)
        alpha = real_word(4);
    else if (conjugated)
        alpha = {LegColor::white, LegColor::black, LegColor::white, LegColor::black};
    else
        alpha = {LegColor::white, LegColor::white, LegColor::black, LegColor::black};
    const WeingartenTable table(s, alpha, N);
    const IndexTuple ones(4, 0);
    ExactMatrix m(N * N, N * N);
    // <z_i z_j, z_k z_l> = tr(z_i z_j (z_k z_l)^*), word order (i, j, l, k).
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l)
                    m(i * N + j, k * N + l) = table.moment(ones, {i, j, l, k});
    return rank(m);
}

}  // namespace ncs
