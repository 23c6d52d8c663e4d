#include "ncsphere/partition.hpp"

#include <algorithm>
#include <numeric>

#include "ncsphere/error.hpp"

namespace ncs {

namespace {

char block_letter(int b) {
    if (b < 26) return static_cast<char>('a' + b);
    if (b < 52) return static_cast<char>('A' + b - 26);
    throw SizeError("too many blocks for a partition literal");
}

int find_root(std::vector<int>& parent, int x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

}  // namespace

Partition::Partition(int upper, int lower, std::vector<int> labels, ColorWord colors)
    : k_(upper), l_(lower) {
    if (upper < 0 || lower < 0) throw FrameError("negative row length");
    const int n = upper + lower;
    if (static_cast<int>(labels.size()) != n) throw FrameError("label count does not match legs");
    if (colors.empty()) colors.assign(n, LegColor::uncolored);
    if (static_cast<int>(colors.size()) != n) throw FrameError("color count does not match legs");
    const auto uncolored = std::count(colors.begin(), colors.end(), LegColor::uncolored);
    if (uncolored != 0 && uncolored != n) throw FrameError("partially colored partition");
    colors_ = std::move(colors);

    // Relabel blocks by first appearance in clockwise order.
    std::vector<std::pair<int, int>> remap;
    labels_.assign(n, -1);
    for (int pos = 0; pos < n; ++pos) {
        const int leg = leg_at(pos);
        const int old = labels[leg];
        auto it = std::find_if(remap.begin(), remap.end(), [&](auto& e) { return e.first == old; });
        if (it == remap.end()) {
            remap.emplace_back(old, static_cast<int>(remap.size()));
            labels_[leg] = static_cast<int>(remap.size()) - 1;
        } else {
            labels_[leg] = it->second;
        }
    }
    blocks_ = static_cast<int>(remap.size());
}

Partition Partition::parse(std::string_view literal) {
    std::string_view body = literal;
    std::string_view color_part;
    if (auto colon = literal.find(':'); colon != std::string_view::npos) {
        body = literal.substr(0, colon);
        color_part = literal.substr(colon + 1);
    }
    const auto bar = body.find('|');
    if (bar == std::string_view::npos || body.find('|', bar + 1) != std::string_view::npos)
        throw ParseError("partition literal needs exactly one '|': " + std::string(literal));
    std::string_view up = body.substr(0, bar);
    std::string_view down = body.substr(bar + 1);
    std::vector<int> labels;
    for (char c : up) labels.push_back(static_cast<unsigned char>(c));
    for (char c : down) labels.push_back(static_cast<unsigned char>(c));
    for (char c : body)
        if (c != '|' && !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')))
            throw ParseError("bad leg symbol in partition literal: " + std::string(literal));
    ColorWord colors;
    if (!color_part.empty()) {
        colors = parse_colors(color_part);
        if (colors.size() != labels.size())
            throw ParseError("color suffix length does not match legs: " + std::string(literal));
    }
    return Partition(static_cast<int>(up.size()), static_cast<int>(down.size()), std::move(labels),
                     std::move(colors));
}

Partition Partition::from_blocks(int upper, int lower, const std::vector<std::vector<int>>& blocks,
                                 ColorWord colors) {
    std::vector<int> labels(upper + lower, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int leg : blocks[b]) {
            if (leg < 0 || leg >= upper + lower || labels[leg] != -1)
                throw FrameError("blocks do not partition the legs");
            labels[leg] = static_cast<int>(b);
        }
    }
    if (std::count(labels.begin(), labels.end(), -1) != 0)
        throw FrameError("blocks do not cover the legs");
    return Partition(upper, lower, std::move(labels), std::move(colors));
}

Partition Partition::from_permutation(const Permutation& sigma) {
    if (!is_permutation(sigma)) throw DomainError("not a permutation");
    const int k = static_cast<int>(sigma.size());
    std::vector<int> labels(2 * k);
    for (int p = 0; p < k; ++p) {
        labels[sigma[p]] = p;
        labels[k + p] = p;
    }
    return Partition(k, k, std::move(labels));
}

bool Partition::colored() const {
    return !colors_.empty() && colors_.front() != LegColor::uncolored;
}

std::vector<std::vector<int>> Partition::blocks() const {
    std::vector<std::vector<int>> out(blocks_);
    for (int leg = 0; leg < legs(); ++leg) out[labels_[leg]].push_back(leg);
    return out;
}

std::vector<int> Partition::block_sizes() const {
    std::vector<int> out(blocks_, 0);
    for (int b : labels_) ++out[b];
    return out;
}

std::string Partition::to_string() const {
    std::string s;
    for (int leg = 0; leg < k_; ++leg) s += block_letter(labels_[leg]);
    s += '|';
    for (int leg = k_; leg < legs(); ++leg) s += block_letter(labels_[leg]);
    if (colored()) s += ':' + colors_to_string(colors_);
    return s;
}

std::string to_string(PartitionClass c) {
    switch (c) {
        case PartitionClass::P: return "P";
        case PartitionClass::P_even: return "P_even";
        case PartitionClass::P2: return "P2";
        case PartitionClass::NC: return "NC";
        case PartitionClass::NC_even: return "NC_even";
        case PartitionClass::NC2: return "NC2";
        case PartitionClass::P2_star: return "P2_star";
        case PartitionClass::Perm: return "Perm";
    }
    return "?";
}

PartitionClass parse_partition_class(std::string_view name) {
    for (auto c : {PartitionClass::P, PartitionClass::P_even, PartitionClass::P2, PartitionClass::NC,
                   PartitionClass::NC_even, PartitionClass::NC2, PartitionClass::P2_star,
                   PartitionClass::Perm})
        if (to_string(c) == name) return c;
    throw ParseError("unknown partition class: " + std::string(name));
}

ColorWord parse_colors(std::string_view word) {
    ColorWord out;
    for (char c : word) {
        if (c == 'o' || c == '1')
            out.push_back(LegColor::white);
        else if (c == '*')
            out.push_back(LegColor::black);
        else if (c == '-')
            out.push_back(LegColor::uncolored);
        else
            throw ParseError("bad color symbol '" + std::string(1, c) + "'");
    }
    return out;
}

std::string colors_to_string(const ColorWord& colors) {
    std::string s;
    for (auto c : colors) s += c == LegColor::white ? 'o' : c == LegColor::black ? '*' : '-';
    return s;
}

Permutation parse_permutation(std::string_view word) {
    Permutation out;
    if (word.find(',') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= word.size()) {
            auto end = word.find(',', start);
            if (end == std::string_view::npos) end = word.size();
            auto tok = word.substr(start, end - start);
            if (tok.empty()) throw ParseError("empty entry in permutation");
            int v = 0;
            for (char c : tok) {
                if (c < '0' || c > '9') throw ParseError("bad permutation entry");
                v = v * 10 + (c - '0');
            }
            out.push_back(v - 1);
            start = end + 1;
        }
    } else {
        for (char c : word) {
            if (c < '1' || c > '9') throw ParseError("bad permutation symbol");
            out.push_back(c - '1');
        }
    }
    if (!is_permutation(out)) throw ParseError("not a permutation: " + std::string(word));
    return out;
}

std::string permutation_to_string(const Permutation& sigma) {
    std::string s;
    const bool wide = sigma.size() > 9;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (wide && i) s += ',';
        s += std::to_string(sigma[i] + 1);
    }
    return s;
}

bool is_permutation(const Permutation& sigma) {
    std::vector<char> seen(sigma.size(), 0);
    for (int v : sigma) {
        if (v < 0 || v >= static_cast<int>(sigma.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

namespace {

struct EnumState {
    PartitionClass cls;
    int k, l, n;
    ColorWord colors;  // by leg
    bool colored;
    std::vector<int> label_at;  // by clockwise position
    std::vector<int> size, first, last;
    std::vector<int> upper_count;
    std::vector<Partition>* out;

    bool pairing() const {
        return cls == PartitionClass::P2 || cls == PartitionClass::NC2 ||
               cls == PartitionClass::P2_star || cls == PartitionClass::Perm;
    }
    bool noncrossing() const {
        return cls == PartitionClass::NC || cls == PartitionClass::NC_even ||
               cls == PartitionClass::NC2;
    }
    bool even() const { return cls == PartitionClass::P_even || cls == PartitionClass::NC_even; }

    int leg_at(int pos) const { return pos < k ? pos : k + (n - 1 - pos); }

    void finish() {
        std::vector<int> labels(n);
        for (int pos = 0; pos < n; ++pos) labels[leg_at(pos)] = label_at[pos];
        Partition p(k, l, std::move(labels), colors);
        if (colored && !colors_compatible(p)) return;
        out->push_back(std::move(p));
    }

    void step(int pos, int open_singletons) {
        const int blocks = static_cast<int>(size.size());
        if (pos == n) {
            for (int b = 0; b < blocks; ++b) {
                if (pairing() && size[b] != 2) return;
                if (even() && size[b] % 2) return;
            }
            finish();
            return;
        }
        const int remaining = n - pos;
        if (pairing() && open_singletons > remaining) return;
        const int leg = leg_at(pos);
        const bool up = leg < k;
        for (int b = 0; b < blocks; ++b) {
            if (pairing()) {
                if (size[b] != 1) continue;
                if (cls == PartitionClass::P2_star && (pos - first[b]) % 2 == 0) continue;
                if (cls == PartitionClass::Perm && (upper_count[b] == 1) == up) continue;
                if (colored) {
                    const int other = leg_at(first[b]);
                    const bool through = (other < k) != up;
                    const bool same = colors[other] == colors[leg];
                    if (through != same) continue;
                }
            }
            if (noncrossing()) {
                bool crossing = false;
                for (int c = 0; c < blocks && !crossing; ++c)
                    if (c != b && first[c] < last[b] && last[b] < last[c]) crossing = true;
                if (crossing) continue;
            }
            const int saved_last = last[b];
            label_at[pos] = b;
            ++size[b];
            last[b] = pos;
            upper_count[b] += up;
            step(pos + 1, open_singletons - (size[b] == 2 ? 1 : 0));
            upper_count[b] -= up;
            last[b] = saved_last;
            --size[b];
        }
        label_at[pos] = blocks;
        size.push_back(1);
        first.push_back(pos);
        last.push_back(pos);
        upper_count.push_back(up);
        step(pos + 1, open_singletons + 1);
        size.pop_back();
        first.pop_back();
        last.pop_back();
        upper_count.pop_back();
    }
};

}  // namespace

std::vector<Partition> enumerate(PartitionClass c, const ColorWord& upper_colors,
                                 const ColorWord& lower_colors, int max_legs) {
    const int k = static_cast<int>(upper_colors.size());
    const int l = static_cast<int>(lower_colors.size());
    if (k + l > max_legs)
        throw SizeError("enumeration of " + std::to_string(k + l) + " legs exceeds bound " +
                        std::to_string(max_legs));
    std::vector<Partition> out;
    const bool pairing = c == PartitionClass::P2 || c == PartitionClass::NC2 ||
                         c == PartitionClass::P2_star || c == PartitionClass::Perm;
    if (pairing && (k + l) % 2) return out;
    if (c == PartitionClass::Perm && k != l) return out;
    EnumState st;
    st.cls = c;
    st.k = k;
    st.l = l;
    st.n = k + l;
    st.colors = upper_colors;
    st.colors.insert(st.colors.end(), lower_colors.begin(), lower_colors.end());
    const auto uncolored = std::count(st.colors.begin(), st.colors.end(), LegColor::uncolored);
    if (uncolored != 0 && uncolored != st.n) throw FrameError("partially colored frame");
    st.colored = st.n > 0 && uncolored == 0;
    st.label_at.assign(st.n, -1);
    st.out = &out;
    st.step(0, 0);
    return out;
}

std::vector<Partition> enumerate(PartitionClass c, int upper, int lower, int max_legs) {
    return enumerate(c, ColorWord(upper, LegColor::uncolored), ColorWord(lower, LegColor::uncolored),
                     max_legs);
}

bool is_noncrossing(const Partition& p) {
    const int n = p.legs();
    std::vector<int> lab(n);
    for (int pos = 0; pos < n; ++pos) lab[pos] = p.label(p.leg_at(pos));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (lab[b] == lab[a]) continue;
            for (int c = b + 1; c < n; ++c) {
                if (lab[c] != lab[a]) continue;
                for (int d = c + 1; d < n; ++d)
                    if (lab[d] == lab[b]) return false;
            }
        }
    return true;
}

bool colors_compatible(const Partition& p) {
    if (!p.colored()) return true;
    std::vector<int> up(p.block_count(), 0), down(p.block_count(), 0);
    for (int leg = 0; leg < p.legs(); ++leg) {
        const int w = p.color(leg) == LegColor::white ? 1 : -1;
        (p.is_upper(leg) ? up : down)[p.label(leg)] += w;
    }
    return up == down;
}

bool is_member(const Partition& p, PartitionClass c) {
    if (!colors_compatible(p)) return false;
    const auto sizes = p.block_sizes();
    const bool all_even = std::all_of(sizes.begin(), sizes.end(), [](int s) { return s % 2 == 0; });
    const bool all_pairs = std::all_of(sizes.begin(), sizes.end(), [](int s) { return s == 2; });
    switch (c) {
        case PartitionClass::P: return true;
        case PartitionClass::P_even: return all_even;
        case PartitionClass::P2: return all_pairs;
        case PartitionClass::NC: return is_noncrossing(p);
        case PartitionClass::NC_even: return all_even && is_noncrossing(p);
        case PartitionClass::NC2: return all_pairs && is_noncrossing(p);
        case PartitionClass::P2_star: {
            if (!all_pairs) return false;
            for (const auto& b : p.blocks())
                if ((p.clockwise_position(b[0]) - p.clockwise_position(b[1])) % 2 == 0) return false;
            return true;
        }
        case PartitionClass::Perm: {
            if (!all_pairs || p.upper() != p.lower()) return false;
            for (const auto& b : p.blocks())
                if (p.is_upper(b[0]) == p.is_upper(b[1])) return false;
            return true;
        }
    }
    return false;
}

JoinResult join(const Partition& p, const Partition& q) {
    if (p.upper() != q.upper() || p.lower() != q.lower() || p.colors() != q.colors())
        throw FrameError("join of partitions on different frames");
    const int n = p.legs();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (const Partition* r : {&p, &q}) {
        std::vector<int> rep(r->block_count(), -1);
        for (int leg = 0; leg < n; ++leg) {
            int& x = rep[r->label(leg)];
            if (x < 0)
                x = leg;
            else
                parent[find_root(parent, leg)] = find_root(parent, x);
        }
    }
    std::vector<int> labels(n);
    for (int leg = 0; leg < n; ++leg) labels[leg] = find_root(parent, leg);
    Partition out(p.upper(), p.lower(), std::move(labels), p.colors());
    const int count = out.block_count();
    return {std::move(out), count};
}

Partition kernel(const IndexTuple& t) { return kernel(t, static_cast<int>(t.size()), 0); }

Partition kernel(const IndexTuple& t, int upper, int lower) {
    if (static_cast<int>(t.size()) != upper + lower) throw FrameError("tuple length does not match frame");
    return Partition(upper, lower, t);
}

bool is_constant_on_blocks(const Partition& p, const IndexTuple& t) {
    if (static_cast<int>(t.size()) != p.legs()) throw FrameError("tuple length does not match legs");
    std::vector<int> value(p.block_count(), 0);
    std::vector<char> set(p.block_count(), 0);
    for (int leg = 0; leg < p.legs(); ++leg) {
        const int b = p.label(leg);
        if (!set[b]) {
            set[b] = 1;
            value[b] = t[leg];
        } else if (value[b] != t[leg]) {
            return false;
        }
    }
    return true;
}

StandardForm standard_form(const Partition& t) {
    for (int s : t.block_sizes())
        if (s % 2) throw ClassError("standard form needs even blocks: " + t.to_string());
    // Moving blocks to the left one at a time in canonical order performs one
    // switch per pair of legs from different blocks that are out of order.
    int switches = 0;
    std::vector<int> legs(t.legs());
    std::iota(legs.begin(), legs.end(), 0);
    auto sort_row = [&](int from, int to) {
        for (int a = from; a < to; ++a)
            for (int b = a + 1; b < to; ++b)
                if (t.label(a) > t.label(b)) ++switches;
        std::stable_sort(legs.begin() + from, legs.begin() + to,
                         [&](int a, int b) { return t.label(a) < t.label(b); });
    };
    sort_row(0, t.upper());
    sort_row(t.upper(), t.legs());
    std::vector<int> labels(t.legs());
    ColorWord colors(t.legs());
    for (int pos = 0; pos < t.legs(); ++pos) {
        labels[pos] = t.label(legs[pos]);
        colors[pos] = t.color(legs[pos]);
    }
    return {Partition(t.upper(), t.lower(), std::move(labels), std::move(colors)), switches};
}

int signature(const Partition& t) { return standard_form(t).switch_count % 2 ? -1 : 1; }

int crossing_count(const Partition& p) {
    std::vector<std::pair<int, int>> strings;
    for (const auto& b : p.blocks()) {
        if (b.size() != 2) throw ClassError("crossing count needs a pairing: " + p.to_string());
        int x = p.clockwise_position(b[0]), y = p.clockwise_position(b[1]);
        strings.emplace_back(std::min(x, y), std::max(x, y));
    }
    int count = 0;
    for (std::size_t i = 0; i < strings.size(); ++i)
        for (std::size_t j = 0; j < strings.size(); ++j) {
            auto [a, b] = strings[i];
            auto [c, d] = strings[j];
            if (a < c && c < b && b < d) ++count;
        }
    return count;
}

std::vector<int> legal_switches(const Partition& p) {
    std::vector<int> out;
    for (int leg = 0; leg + 1 < p.legs(); ++leg) {
        if (leg + 1 == p.upper()) continue;
        if (p.label(leg) != p.label(leg + 1)) out.push_back(leg);
    }
    return out;
}

Partition apply_switch(const Partition& p, int leg) {
    if (leg < 0 || leg + 1 >= p.legs() || leg + 1 == p.upper() || p.label(leg) == p.label(leg + 1))
        throw DomainError("illegal switch");
    auto labels = p.labels();
    auto colors = p.colors();
    std::swap(labels[leg], labels[leg + 1]);
    std::swap(colors[leg], colors[leg + 1]);
    return Partition(p.upper(), p.lower(), std::move(labels), std::move(colors));
}

bool halfcommuting_membership(const Permutation& sigma) {
    return is_member(Partition::from_permutation(sigma), PartitionClass::P2_star);
}

Permutation to_permutation(const Partition& p) {
    if (!is_member(p, PartitionClass::Perm)) throw ClassError("not a permutation diagram: " + p.to_string());
    const int k = p.upper();
    Permutation sigma(k);
    for (const auto& b : p.blocks()) sigma[b[1] - k] = b[0];
    return sigma;
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw FrameError("composing permutations of different sizes");
    Permutation out(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) out[x] = a[b[x]];
    return out;
}

Permutation inverse(const Permutation& sigma) {
    Permutation out(sigma.size());
    for (std::size_t x = 0; x < sigma.size(); ++x) out[sigma[x]] = static_cast<int>(x);
    return out;
}

Permutation identity_permutation(int k) {
    Permutation out(k);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

int permutation_sign(const Permutation& sigma) {
    int inv = 0;
    for (std::size_t a = 0; a < sigma.size(); ++a)
        for (std::size_t b = a + 1; b < sigma.size(); ++b)
            if (sigma[a] > sigma[b]) ++inv;
    return inv % 2 ? -1 : 1;
}

std::vector<Permutation> all_permutations(int k) {
    std::vector<Permutation> out;
    Permutation s = identity_permutation(k);
    do out.push_back(s);
    while (std::next_permutation(s.begin(), s.end()));
    return out;
}

}  // namespace ncs
