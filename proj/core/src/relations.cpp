#include "ncsphere/relations.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "ncsphere/error.hpp"

namespace ncs {

namespace {

constexpr int kMaxDegree = 12;
constexpr long long kMaxWords = 20'000'000;

enum class Rule : std::uint8_t {
    axiom,
    swap,
    cycle,
    flip,
    involution,
    merge,
    left_multiply,
    right_multiply,
    contraction,
    positivity,
};

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::axiom: return "axiom";
        case Rule::swap: return "swap";
        case Rule::cycle: return "cycle";
        case Rule::flip: return "flip";
        case Rule::involution: return "involution";
        case Rule::merge: return "merge";
        case Rule::left_multiply: return "left_multiply";
        case Rule::right_multiply: return "right_multiply";
        case Rule::contraction: return "contraction";
        case Rule::positivity: return "positivity";
    }
    return "?";
}

constexpr Rule generators[] = {Rule::swap,       Rule::cycle, Rule::flip,          Rule::involution,
                               Rule::merge,      Rule::left_multiply, Rule::right_multiply};

bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p].var != b[p].var) return a[p].var < b[p].var;
    for (std::size_t p = 0; p < a.size(); ++p)
        if (a[p].star != b[p].star) return b[p].star;
    return false;
}

int variable_count(const Word& w) {
    int m = 0;
    for (const auto& l : w) m = std::max(m, l.var + 1);
    return m;
}

std::string kernel_suffix(const std::vector<int>& kernel) {
    const int blocks = kernel.empty() ? 0 : *std::max_element(kernel.begin(), kernel.end()) + 1;
    if (blocks < 2) return "";
    std::string s = "[";
    for (int b = 0; b < blocks; ++b) {
        if (b) s += "≠";
        s += static_cast<char>('a' + b);
    }
    return s + "]";
}

}  // namespace

Word parse_word(std::string_view s) {
    Word w;
    std::map<char, int> vars;
    for (std::size_t p = 0; p < s.size(); ++p) {
        const char c = s[p];
        if (c == '*') {
            if (w.empty()) throw ParseError("word starts with '*'");
            w.back().star = !w.back().star;
            continue;
        }
        if (!std::islower(static_cast<unsigned char>(c))) throw ParseError(std::string("bad letter in word: ") + c);
        auto [it, fresh] = vars.emplace(c, static_cast<int>(vars.size()));
        w.push_back({it->second, false});
    }
    return w;
}

std::string word_to_string(const Word& w) {
    std::string s;
    for (const auto& l : w) {
        s += static_cast<char>('a' + l.var);
        if (l.star) s += '*';
    }
    return s.empty() ? "1" : s;
}

std::vector<int> word_kernel(const Word& w) {
    std::map<int, int> label;
    std::vector<int> k;
    for (const auto& l : w) k.push_back(label.emplace(l.var, static_cast<int>(label.size())).first->second);
    return k;
}

std::optional<Permutation> matching_permutation(const Word& u, const Word& v) {
    if (u.size() != v.size()) return std::nullopt;
    Permutation sigma(v.size());
    std::vector<char> used(u.size(), 0);
    for (std::size_t p = 0; p < v.size(); ++p) {
        std::size_t q = 0;
        while (q < u.size() && (used[q] || u[q] != v[p])) ++q;
        if (q == u.size()) return std::nullopt;
        used[q] = 1;
        sigma[p] = static_cast<int>(q);
    }
    return sigma;
}

int relation_sign(const Permutation& sigma, const std::vector<int>& kernel, bool twisted) {
    if (sigma.size() != kernel.size()) throw FrameError("kernel and permutation lengths differ");
    if (!is_permutation(sigma)) throw DomainError("not a permutation: " + permutation_to_string(sigma));
    if (!twisted) return 1;
    int m = 0;
    for (std::size_t p = 0; p < sigma.size(); ++p)
        for (std::size_t q = p + 1; q < sigma.size(); ++q)
            if (sigma[p] > sigma[q] && kernel[sigma[p]] != kernel[sigma[q]]) ++m;
    return m % 2 ? -1 : 1;
}

int relation_sign(const Permutation& sigma, const std::vector<int>& kernel, const SphereSpec& s) {
    return relation_sign(sigma, kernel, s.twisted);
}

int word_sign(const Word& u, const Word& v, bool twisted) {
    auto sigma = matching_permutation(u, v);
    if (!sigma) throw DomainError(word_to_string(v) + " is not a rearrangement of " + word_to_string(u));
    return relation_sign(*sigma, word_kernel(u), twisted);
}

Word RelationSchema::lhs() const {
    Word w;
    for (std::size_t p = 0; p < kernel.size(); ++p)
        w.push_back({kernel[p], !exps.empty() && exps[p] == LegColor::black});
    return w;
}

Word RelationSchema::rhs() const {
    const Word l = lhs();
    Word w;
    for (int q : sigma) w.push_back(l[q]);
    return w;
}

RelationSchema parse_relation(std::string_view literal, const Regime& r) {
    std::string_view body = literal;
    std::string_view suffix;
    if (auto open = literal.find('['); open != std::string_view::npos) {
        if (literal.back() != ']') throw ParseError("unterminated kernel suffix");
        body = literal.substr(0, open);
        suffix = literal.substr(open + 1, literal.size() - open - 2);
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("relation without '='");
    std::string_view left = body.substr(0, eq), right = body.substr(eq + 1);
    int shown = 1;
    if (!right.empty() && (right[0] == '+' || right[0] == '-')) {
        shown = right[0] == '-' ? -1 : 1;
        right.remove_prefix(1);
    }
    // Parse both sides against one variable table.
    const Word both = parse_word(std::string(left) + std::string(right));
    const std::size_t k = parse_word(left).size();
    const Word u(both.begin(), both.begin() + static_cast<long>(k));
    const Word v(both.begin() + static_cast<long>(k), both.end());
    if (k == 0) throw ParseError("empty relation");
    if (r.field == Field::real)
        for (const auto& l : both)
            if (l.star) throw ParseError("conjugates in a real relation");
    auto sigma = matching_permutation(u, v);
    if (!sigma) throw ParseError("right side is not a rearrangement of the left side");

    RelationSchema s;
    s.sigma = *sigma;
    s.kernel = word_kernel(u);
    if (r.field == Field::complex)
        for (const auto& l : u) s.exps.push_back(l.star ? LegColor::black : LegColor::white);
    if (!suffix.empty()) {
        std::string letters;
        for (std::size_t p = 0; p < suffix.size();) {
            if (suffix.substr(p, 3) == "≠") {
                p += 3;
            } else if (suffix.substr(p, 2) == "!=") {
                p += 2;
            } else if (std::islower(static_cast<unsigned char>(suffix[p]))) {
                letters += suffix[p++];
            } else {
                throw ParseError("bad kernel suffix");
            }
        }
        std::string lhs_letters;
        for (char c : left)
            if (c != '*' && lhs_letters.find(c) == std::string::npos) lhs_letters += c;
        std::string a = letters, b = lhs_letters;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end())
            throw ParseError("kernel suffix must list each variable once");
        s.restricted = true;
    }
    s.sign = relation_sign(s.sigma, s.kernel, r.twisted);
    if (shown != s.sign)
        throw DomainError("sign of " + std::string(literal) + " is not the forced sign for regime " +
                          regime_name(r));
    return s;
}

std::string to_string(const RelationSchema& s) {
    std::string out = word_to_string(s.lhs()) + "=" + (s.sign < 0 ? "-" : "+") + word_to_string(s.rhs());
    if (s.restricted) out += kernel_suffix(s.kernel);
    return out;
}

namespace {

RelationSchema distinct_schema(const Permutation& sigma, Field f, bool twisted) {
    RelationSchema s;
    s.sigma = sigma;
    s.kernel.resize(sigma.size());
    std::iota(s.kernel.begin(), s.kernel.end(), 0);
    if (f == Field::complex) s.exps.assign(sigma.size(), LegColor::white);
    s.sign = relation_sign(sigma, s.kernel, twisted);
    return s;
}

// Every kernel of k positions, as canonical label vectors, coarsest last.
std::vector<std::vector<int>> all_kernels(int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> rgs(k, 0);
    std::function<void(int, int)> rec = [&](int p, int blocks) {
        if (p == k) {
            out.push_back(rgs);
            return;
        }
        for (int b = 0; b <= blocks; ++b) {
            rgs[p] = b;
            rec(p + 1, std::max(blocks, b + 1));
        }
    };
    rec(0, 0);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return *std::max_element(a.begin(), a.end()) > *std::max_element(b.begin(), b.end());
    });
    return out;
}

}  // namespace

std::vector<std::string> describe(const RelationSystem& sys) {
    std::vector<std::string> lines;
    const std::string gen = sys.group ? "u_ij" : (sys.field == Field::real ? "x_i" : "z_i");
    if (sys.selfadjoint) lines.push_back(gen + " self-adjoint");
    if (sys.group)
        lines.push_back(sys.field == Field::real ? "u orthogonal" : "u and its transpose unitary");
    else if (sys.quadratic)
        lines.push_back(sys.field == Field::real ? "sum x_i^2 = 1" : "sum z_i z_i* = sum z_i* z_i = 1");
    for (const auto& s : sys.schemas) {
        if (!sys.group) {
            if (sys.sign_rule == SignRule::distinct && !s.restricted) {
                // Spell out the forced sign on every kernel.
                for (const auto& ker : all_kernels(static_cast<int>(s.sigma.size()))) {
                    RelationSchema t = s;
                    t.kernel = ker;
                    t.restricted = true;
                    t.sign = relation_sign(t.sigma, ker, true);
                    if (t.lhs() != t.rhs()) lines.push_back(to_string(t));
                }
            } else {
                lines.push_back(to_string(s));
            }
            continue;
        }
        const std::string w = word_to_string(s.lhs()) + "=" + word_to_string(s.rhs());
        switch (sys.sign_rule) {
            case SignRule::row_column:
                lines.push_back(word_to_string(s.lhs()) + "=-" + word_to_string(s.rhs()) +
                                " for distinct generators on the same row or column, " + w + " otherwise");
                break;
            case SignRule::span:
                lines.push_back(word_to_string(s.lhs()) + "=-" + word_to_string(s.rhs()) +
                                " for span (<=2,3) or (3,<=2), " + w + " otherwise");
                break;
            default: lines.push_back(w); break;
        }
    }
    if (sys.field == Field::complex && !sys.schemas.empty())
        lines.push_back("every letter may be conjugated");
    return lines;
}

RelationSystem sphere_relations(const SphereSpec& s) {
    RelationSystem sys;
    sys.field = s.field;
    sys.sign_rule = s.twisted ? SignRule::distinct : SignRule::plain;
    sys.selfadjoint = s.field == Field::real;
    if (s.level == Level::classical) sys.schemas.push_back(distinct_schema({1, 0}, s.field, s.twisted));
    if (s.level == Level::half) sys.schemas.push_back(distinct_schema({2, 1, 0}, s.field, s.twisted));
    return sys;
}

RelationSystem group_relations(const GroupSpec& g) {
    RelationSystem sys;
    sys.field = g.field;
    sys.group = true;
    sys.quadratic = false;
    sys.selfadjoint = g.field == Field::real;
    if (g.level == Level::classical) {
        sys.sign_rule = g.twisted ? SignRule::row_column : SignRule::plain;
        sys.schemas.push_back(distinct_schema({1, 0}, g.field, false));
    } else if (g.level == Level::half) {
        sys.sign_rule = g.twisted ? SignRule::span : SignRule::plain;
        sys.schemas.push_back(distinct_schema({2, 1, 0}, g.field, false));
    }
    return sys;
}

RelationSystem monomial_system(const std::vector<Permutation>& E, const Regime& r) {
    RelationSystem sys;
    sys.field = r.field;
    sys.sign_rule = r.twisted ? SignRule::distinct : SignRule::plain;
    sys.selfadjoint = r.field == Field::real;
    for (const auto& sigma : E) {
        if (!is_permutation(sigma)) throw DomainError("not a permutation: " + permutation_to_string(sigma));
        sys.schemas.push_back(distinct_schema(sigma, r.field, r.twisted));
    }
    return sys;
}

int group_relation_sign(const RelationSystem& sys, const Permutation& sigma, const IndexTuple& rows,
                        const IndexTuple& cols) {
    if (rows.size() != sigma.size() || cols.size() != sigma.size())
        throw FrameError("generator indices do not match the permutation");
    if (!is_permutation(sigma)) throw DomainError("not a permutation");
    const int k = static_cast<int>(sigma.size());
    switch (sys.sign_rule) {
        case SignRule::plain: return 1;
        case SignRule::distinct: {
            std::vector<int> kernel(k);
            for (int p = 0; p < k; ++p) kernel[p] = rows[p] * 1'000'003 + cols[p];
            return relation_sign(sigma, kernel, true);
        }
        case SignRule::row_column: {
            int m = 0;
            for (int p = 0; p < k; ++p)
                for (int q = p + 1; q < k; ++q) {
                    const int a = sigma[p], b = sigma[q];
                    if (a < b) continue;
                    const bool distinct = rows[a] != rows[b] || cols[a] != cols[b];
                    if (distinct && (rows[a] == rows[b] || cols[a] == cols[b])) ++m;
                }
            return m % 2 ? -1 : 1;
        }
        case SignRule::span: {
            if (sigma != Permutation{2, 1, 0}) throw DomainError("span signs are defined for abc=cba only");
            const int r = static_cast<int>(std::set<int>(rows.begin(), rows.end()).size());
            const int c = static_cast<int>(std::set<int>(cols.begin(), cols.end()).size());
            return span_sign_table()[r - 1][c - 1];
        }
    }
    return 1;
}

SignTable span_sign_table() { return {{{1, 1, -1}, {1, 1, -1}, {-1, -1, 1}}}; }

bool comult_sign_check(const GroupSpec& g, const SignTable& t) {
    if (g.level != Level::half || !g.twisted)
        throw DomainError("comultiplication signs concern the twisted half-liberated groups");
    for (int r = 0; r < 3; ++r) {
        if (t[r][r] != 1) return false;
        for (int c = 0; c < 3; ++c)
            if (t[r][c] != t[c][r] || (t[r][c] != 1 && t[r][c] != -1)) return false;
    }
    auto span = [](int a, int b, int c) { return static_cast<int>(std::set<int>{a, b, c}.size()) - 1; };
    // U_ia U_jb U_kc = sum u_ix u_jy u_kz (x) u_xa u_yb u_zc; conjugating
    // letters does not move rows or columns, so the starred case is the same.
    for (int code = 0; code < 19683; ++code) {
        int v[9];
        for (int p = 0, x = code; p < 9; ++p, x /= 3) v[p] = x % 3;
        const int outer_rows = span(v[0], v[1], v[2]);
        const int middle = span(v[3], v[4], v[5]);
        const int outer_cols = span(v[6], v[7], v[8]);
        if (t[outer_rows][middle] * t[middle][outer_cols] != t[outer_rows][outer_cols]) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

struct Saturation::Impl {
    struct Fact {
        int a, b;
    };
    struct Edge {
        int a, b;
        Rule rule;
        int nprem;
        std::array<Fact, 3> prem;
    };
    struct Candidate {
        int u, v, uu, uv, vu, vv;
    };

    RelationSystem sys;
    Bounds bounds;
    int V = 0, D = 0, E = 1, L = 0;
    std::vector<long long> offset;
    int total = 0;
    std::vector<int> parent, size, rep;
    std::vector<int> contracted, contracted_src;
    std::vector<Edge> edges;
    std::deque<Edge> queue;
    std::vector<Candidate> candidates;
    std::vector<Fact> goals;
    std::size_t goals_met = 0;
    bool truncated = false;
    bool stopped = false;

    mutable std::vector<std::vector<int>> adjacency;

    int degree_of(int id) const {
        int d = 0;
        while (offset[d + 1] <= id) ++d;
        return d;
    }
    int decode(int id, int* c) const {
        const int d = degree_of(id);
        long long r = id - offset[d];
        for (int p = d - 1; p >= 0; --p) {
            c[p] = static_cast<int>(r % L);
            r /= L;
        }
        return d;
    }
    int encode(const int* c, int d) const {
        long long r = 0;
        for (int p = 0; p < d; ++p) r = r * L + c[p];
        return static_cast<int>(offset[d] + r);
    }
    int id_of(const Word& w) const {
        if (static_cast<int>(w.size()) > D) throw SizeError("word longer than the degree bound");
        int c[kMaxDegree];
        for (std::size_t p = 0; p < w.size(); ++p) {
            if (w[p].var >= V || w[p].var < 0) throw SizeError("word uses more variables than the bound");
            if (w[p].star && E == 1) throw FrameError("conjugate letter in a real system");
            c[p] = w[p].var * E + (w[p].star ? 1 : 0);
        }
        return encode(c, static_cast<int>(w.size()));
    }
    Word word_of(int id) const {
        int c[kMaxDegree];
        const int d = decode(id, c);
        Word w(d);
        for (int p = 0; p < d; ++p) w[p] = {c[p] / E, E == 2 && c[p] % 2 == 1};
        return w;
    }
    Word pretty(int id) const { return word_of(id); }

    int find(int x) const {
        auto& par = const_cast<std::vector<int>&>(parent);
        while (par[x] != x) x = par[x] = par[par[x]];
        return x;
    }

    // Order key within a class: variables, then exponents.
    bool before(int x, int y) const {
        int a[kMaxDegree], b[kMaxDegree];
        const int d = decode(x, a);
        decode(y, b);
        for (int p = 0; p < d; ++p)
            if (a[p] / E != b[p] / E) return a[p] / E < b[p] / E;
        for (int p = 0; p < d; ++p)
            if (a[p] % E != b[p] % E) return a[p] % E < b[p] % E;
        return false;
    }

    int image(int id, Rule r) {
        int c[kMaxDegree + 1];
        int d = decode(id, c);
        switch (r) {
            case Rule::swap:
                if (V < 2) return -1;
                for (int p = 0; p < d; ++p) {
                    const int v = c[p] / E;
                    if (v < 2) c[p] = (1 - v) * E + c[p] % E;
                }
                break;
            case Rule::cycle:
                if (V < 3) return -1;
                for (int p = 0; p < d; ++p) c[p] = ((c[p] / E + 1) % V) * E + c[p] % E;
                break;
            case Rule::flip:
                if (E == 1) return -1;
                for (int p = 0; p < d; ++p)
                    if (c[p] / E == 0) c[p] ^= 1;
                break;
            case Rule::involution:
                std::reverse(c, c + d);
                if (E == 2)
                    for (int p = 0; p < d; ++p) c[p] ^= 1;
                break;
            case Rule::merge:
                if (V < 2) return -1;
                for (int p = 0; p < d; ++p)
                    if (c[p] / E == 1) c[p] = c[p] % E;
                break;
            case Rule::left_multiply:
                if (d == D) {
                    truncated = true;
                    return -1;
                }
                std::copy_backward(c, c + d, c + d + 1);
                c[0] = 0;
                ++d;
                break;
            case Rule::right_multiply:
                if (d == D) {
                    truncated = true;
                    return -1;
                }
                c[d++] = 0;
                break;
            default: return -1;
        }
        return encode(c, d);
    }

    void push(int a, int b, Rule rule, std::initializer_list<Fact> prem) {
        if (a == b || find(a) == find(b)) return;
        Edge e{a, b, rule, static_cast<int>(prem.size()), {}};
        std::copy(prem.begin(), prem.end(), e.prem.begin());
        queue.push_back(e);
    }

    void unite(const Edge& e) {
        int ra = find(e.a), rb = find(e.b);
        if (ra == rb) return;
        edges.push_back(e);
        if (size[ra] < size[rb]) std::swap(ra, rb);
        parent[rb] = ra;
        size[ra] += size[rb];
        if (before(rep[rb], rep[ra])) rep[ra] = rep[rb];
        if (sys.quadratic) {
            for (int v = 0; v < V; ++v) {
                const int cb = contracted[rb * V + v];
                if (cb < 0) continue;
                const int ca = contracted[ra * V + v];
                if (ca < 0) {
                    contracted[ra * V + v] = cb;
                    contracted_src[ra * V + v] = contracted_src[rb * V + v];
                } else {
                    push(ca, cb, Rule::contraction, {{contracted_src[ra * V + v], contracted_src[rb * V + v]}});
                }
            }
        }
        for (Rule g : generators) {
            const int ga = image(e.a, g);
            if (ga < 0) continue;
            const int gb = image(e.b, g);
            if (gb >= 0) push(ga, gb, g, {{e.a, e.b}});
        }
        while (goals_met < goals.size() && find(goals[goals_met].a) == find(goals[goals_met].b)) ++goals_met;
        if (!goals.empty() && goals_met == goals.size()) stopped = true;
    }

    bool positivity_round() {
        bool any = false;
        for (const auto& c : candidates) {
            if (find(c.u) == find(c.v)) continue;
            const int r = find(c.uu);
            if (find(c.uv) == r && find(c.vu) == r && find(c.vv) == r) {
                push(c.u, c.v, Rule::positivity, {{c.uu, c.uv}, {c.uu, c.vu}, {c.uu, c.vv}});
                any = true;
            }
        }
        return any;
    }

    void setup() {
        E = sys.field == Field::complex ? 2 : 1;
        for (const auto& s : sys.schemas) {
            const int k = static_cast<int>(s.sigma.size());
            D = std::max(D, k);
            V = std::max(V, s.kernel.empty() ? 0 : *std::max_element(s.kernel.begin(), s.kernel.end()) + 1);
        }
        V = std::max(V, bounds.max_indices);
        D = std::max(D, bounds.max_degree);
        if (V < 1 || D < 1 || D > kMaxDegree || V > 8) throw SizeError("saturation bounds out of range");
        bounds = {D, V};
        L = V * E;
        offset.assign(D + 2, 0);
        long long pw = 1, acc = 0;
        for (int d = 0; d <= D; ++d) {
            offset[d] = acc;
            acc += pw;
            if (acc > kMaxWords) throw SizeError("too many words for the saturation bounds");
            pw *= L;
        }
        offset[D + 1] = acc;
        total = static_cast<int>(acc);
        parent.resize(total);
        std::iota(parent.begin(), parent.end(), 0);
        size.assign(total, 1);
        rep.resize(total);
        std::iota(rep.begin(), rep.end(), 0);
        if (sys.quadratic) {
            contracted.assign(static_cast<std::size_t>(total) * V, -1);
            contracted_src.assign(static_cast<std::size_t>(total) * V, -1);
            int c[kMaxDegree], out[kMaxDegree];
            for (int id = 0; id < total; ++id) {
                const int d = decode(id, c);
                for (int v = 0; v < V; ++v) {
                    int first = -1, count = 0;
                    for (int p = 0; p < d; ++p)
                        if (c[p] / E == v) {
                            if (count++ == 0) first = p;
                        }
                    if (count != 2 || first + 1 >= d || c[first + 1] / E != v) continue;
                    if (E == 2 && c[first] == c[first + 1]) continue;
                    int n = 0;
                    for (int p = 0; p < d; ++p)
                        if (p != first && p != first + 1) out[n++] = c[p];
                    contracted[static_cast<std::size_t>(id) * V + v] = encode(out, n);
                    contracted_src[static_cast<std::size_t>(id) * V + v] = id;
                }
            }
        }
        // Positivity candidates: two words with the same letters.
        std::map<std::vector<int>, std::vector<int>> groups;
        for (int d = 1; 2 * d <= D; ++d)
            for (long long id = offset[d]; id < offset[d + 1]; ++id) {
                int c[kMaxDegree];
                decode(static_cast<int>(id), c);
                std::vector<int> key(c, c + d);
                std::sort(key.begin(), key.end());
                groups[key].push_back(static_cast<int>(id));
            }
        for (const auto& [key, ids] : groups)
            for (std::size_t x = 0; x < ids.size(); ++x)
                for (std::size_t y = x + 1; y < ids.size(); ++y) {
                    const int u = ids[x], v = ids[y];
                    const int su = image(u, Rule::involution), sv = image(v, Rule::involution);
                    candidates.push_back({u, v, concat(su, u), concat(su, v), concat(sv, u), concat(sv, v)});
                }
    }

    int concat(int x, int y) const {
        int a[kMaxDegree], b[kMaxDegree];
        const int dx = decode(x, a);
        const int dy = decode(y, b);
        std::copy(b, b + dy, a + dx);
        return encode(a, dx + dy);
    }

    void run() {
        for (const auto& s : sys.schemas) {
            if (s.restricted) {
                const Word l = s.lhs();
                const Word r = s.rhs();
                const int blocks = variable_count(l);
                for (int x = 0; x < blocks; ++x)
                    for (int y = x + 1; y < blocks; ++y) {
                        Word ml = l, mr = r;
                        for (auto* w : {&ml, &mr})
                            for (auto& let : *w)
                                if (let.var == y) let.var = x;
                        if (ml != mr)
                            throw DomainError("restricted schema " + to_string(s) +
                                              " fails on a coarser kernel; give it for all kernels");
                    }
            }
            push(id_of(s.lhs()), id_of(s.rhs()), Rule::axiom, {});
        }
        while (!stopped) {
            while (!queue.empty() && !stopped) {
                const Edge e = queue.front();
                queue.pop_front();
                unite(e);
            }
            if (stopped || !positivity_round()) break;
        }
        queue.clear();
    }

    std::vector<int> path(int u, int v) const {
        if (adjacency.empty()) {
            adjacency.resize(total);
            for (std::size_t i = 0; i < edges.size(); ++i) {
                adjacency[edges[i].a].push_back(static_cast<int>(i));
                adjacency[edges[i].b].push_back(static_cast<int>(i));
            }
        }
        std::map<int, int> via;  // node -> edge used to reach it
        std::deque<int> todo{u};
        via[u] = -1;
        while (!todo.empty()) {
            const int x = todo.front();
            todo.pop_front();
            if (x == v) break;
            for (int e : adjacency[x]) {
                const int y = edges[e].a == x ? edges[e].b : edges[e].a;
                if (via.emplace(y, e).second) todo.push_back(y);
            }
        }
        std::vector<int> out;
        for (int x = v; x != u;) {
            const int e = via.at(x);
            out.push_back(e);
            x = edges[e].a == x ? edges[e].b : edges[e].a;
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    std::string fact_string(int a, int b, const std::string& note = "") const {
        const Word u = word_of(a), v = word_of(b);
        const int s = word_sign(u, v, sys.twisted());
        return word_to_string(u) + "=" + (s < 0 ? "-" : "+") + word_to_string(v) + note;
    }

    std::string quadratic_note(int src, int v) const {
        if (E == 1) return "";
        const Word w = word_of(src);
        for (std::size_t p = 0; p + 1 < w.size(); ++p)
            if (w[p].var == v) return w[p].star ? " (z*z)" : " (zz*)";
        return "";
    }
};

namespace {

struct Explainer {
    const Saturation::Impl& s;
    Explanation out;
    std::map<std::pair<int, int>, int> fact_step;
    std::map<int, int> edge_step;

    int fact(int a, int b) {
        if (a == b) return add(s.fact_string(a, b), "reflexivity", {});
        if (auto it = fact_step.find({a, b}); it != fact_step.end()) return it->second;
        const auto p = s.path(a, b);
        int id;
        if (p.size() == 1) {
            id = edge(p[0]);
        } else {
            std::vector<int> prem;
            for (int e : p) prem.push_back(edge(e));
            id = add(s.fact_string(a, b), "transitivity", prem);
        }
        fact_step[{a, b}] = id;
        return id;
    }

    int edge(int e) {
        if (auto it = edge_step.find(e); it != edge_step.end()) return it->second;
        const auto& ed = s.edges[e];
        std::vector<int> prem;
        for (int i = 0; i < ed.nprem; ++i) prem.push_back(fact(ed.prem[i].a, ed.prem[i].b));
        std::string note;
        if (ed.rule == Rule::contraction) {
            const Word src = s.word_of(ed.prem[0].a);
            const Word dst = s.word_of(ed.a);
            // The contracted variable is the one that disappeared.
            std::vector<int> count(s.V, 0);
            for (const auto& l : src) ++count[l.var];
            for (const auto& l : dst) --count[l.var];
            for (int v = 0; v < s.V; ++v)
                if (count[v] == 2)
                    note = " summing " + std::string(1, static_cast<char>('a' + v)) +
                           s.quadratic_note(ed.prem[0].a, v) + s.quadratic_note(ed.prem[0].b, v);
        }
        const int id = add(s.fact_string(ed.a, ed.b), std::string(rule_name(ed.rule)) + note, prem);
        edge_step[e] = id;
        return id;
    }

    int add(std::string f, std::string rule, std::vector<int> prem) {
        const int id = static_cast<int>(out.steps.size());
        out.steps.push_back({id, std::move(f), std::move(rule), std::move(prem)});
        return id;
    }
};

}  // namespace

Saturation::Saturation(const RelationSystem& sys, Bounds bounds, const std::vector<std::pair<Word, Word>>& goals)
    : impl_(std::make_shared<Impl>()) {
    if (sys.group) throw DomainError("saturation works on sphere relation systems");
    impl_->sys = sys;
    impl_->bounds = bounds;
    for (const auto& [u, v] : goals) {
        impl_->V = std::max(impl_->V, std::max(variable_count(u), variable_count(v)));
        impl_->D = std::max(impl_->D, static_cast<int>(std::max(u.size(), v.size())));
    }
    impl_->setup();
    for (const auto& [u, v] : goals) impl_->goals.push_back({impl_->id_of(u), impl_->id_of(v)});
    impl_->run();
}

const Bounds& Saturation::bounds() const { return impl_->bounds; }
bool Saturation::truncated() const { return impl_->truncated; }
bool Saturation::stopped_early() const { return impl_->stopped; }
std::size_t Saturation::fact_count() const { return impl_->edges.size(); }

bool Saturation::equivalent(const Word& u, const Word& v) const {
    return impl_->find(impl_->id_of(u)) == impl_->find(impl_->id_of(v));
}

Word Saturation::representative(const Word& w) const {
    return impl_->word_of(impl_->rep[impl_->find(impl_->id_of(w))]);
}

std::optional<Word> Saturation::contraction_source(const Word& w, int var) const {
    if (!impl_->sys.quadratic || var < 0 || var >= impl_->V) return std::nullopt;
    const int r = impl_->find(impl_->id_of(w));
    const int c = impl_->contracted_src[static_cast<std::size_t>(r) * impl_->V + var];
    if (c < 0) return std::nullopt;
    return impl_->word_of(c);
}

std::optional<Word> Saturation::contraction(const Word& w, int var) const {
    if (!impl_->sys.quadratic || var < 0 || var >= impl_->V) return std::nullopt;
    const int r = impl_->find(impl_->id_of(w));
    const int c = impl_->contracted[static_cast<std::size_t>(r) * impl_->V + var];
    if (c < 0) return std::nullopt;
    return impl_->word_of(c);
}

std::vector<RelationSchema> Saturation::derived(int max_degree) const {
    const auto& s = *impl_;
    std::vector<RelationSchema> out;
    const int top = std::min(max_degree, s.D);
    for (int id = 0; id < static_cast<int>(s.offset[top + 1]); ++id) {
        const int r = s.rep[s.find(id)];
        if (r == id) continue;
        const Word rw = s.word_of(r);
        int next = 0;
        bool ordered = true;
        for (const auto& l : rw) {
            if (l.var > next) ordered = false;
            if (l.var == next) ++next;
        }
        if (!ordered) continue;
        RelationSchema schema;
        schema.kernel = word_kernel(rw);
        schema.sigma = *matching_permutation(rw, s.word_of(id));
        if (s.E == 2)
            for (const auto& l : rw) schema.exps.push_back(l.star ? LegColor::black : LegColor::white);
        schema.restricted = true;
        schema.sign = relation_sign(schema.sigma, schema.kernel, s.sys.twisted());
        out.push_back(std::move(schema));
    }
    return out;
}

Explanation Saturation::explain(const std::vector<std::pair<Word, Word>>& facts) const {
    Explainer ex{*impl_, {}, {}, {}};
    for (const auto& [u, v] : facts) {
        const int a = impl_->id_of(u), b = impl_->id_of(v);
        if (impl_->find(a) != impl_->find(b))
            throw DomainError(word_to_string(u) + "=" + word_to_string(v) + " is not derived");
        ex.out.roots.push_back(ex.fact(a, b));
    }
    return ex.out;
}

std::vector<RelationSchema> saturate(const RelationSystem& sys, Bounds bounds, int report_degree) {
    return Saturation(sys, bounds).derived(report_degree);
}

// ---------------------------------------------------------------------------

namespace {

using Poly = std::map<Word, long long, decltype(&word_less)>;

Poly make_poly() { return Poly(&word_less); }

struct ExprParser {
    std::string_view s;
    std::size_t p = 0;
    std::map<char, int> vars;

    void skip() {
        while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p]))) ++p;
    }
    bool peek(char c) {
        skip();
        return p < s.size() && s[p] == c;
    }
    long long number() {
        skip();
        long long n = 0;
        if (p >= s.size() || !std::isdigit(static_cast<unsigned char>(s[p]))) throw ParseError("expected a number");
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) n = n * 10 + (s[p++] - '0');
        return n;
    }
    static Poly times(const Poly& a, const Poly& b) {
        Poly r = make_poly();
        for (const auto& [u, x] : a)
            for (const auto& [v, y] : b) {
                Word w = u;
                w.insert(w.end(), v.begin(), v.end());
                r[w] += x * y;
            }
        return r;
    }
    Poly expr() {
        Poly r = make_poly();
        int sign = 1;
        if (peek('+') || peek('-')) sign = s[p++] == '-' ? -1 : 1;
        while (true) {
            for (const auto& [w, c] : term()) r[w] += sign * c;
            if (peek('+') || peek('-')) {
                sign = s[p++] == '-' ? -1 : 1;
            } else {
                break;
            }
        }
        return r;
    }
    Poly term() {
        Poly r = make_poly();
        r[Word{}] = 1;
        bool any = false;
        skip();
        if (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) {
            r[Word{}] = number();
            any = true;
        }
        while (true) {
            skip();
            if (p >= s.size()) break;
            const char c = s[p];
            Poly f = make_poly();
            if (c == '(') {
                ++p;
                f = expr();
                if (!peek(')')) throw ParseError("missing ')'");
                ++p;
            } else if (std::islower(static_cast<unsigned char>(c))) {
                ++p;
                auto [it, fresh] = vars.emplace(c, static_cast<int>(vars.size()));
                Letter l{it->second, false};
                if (peek('*')) {
                    ++p;
                    l.star = true;
                }
                f[Word{l}] = 1;
            } else {
                break;
            }
            if (peek('^')) {
                ++p;
                const long long n = number();
                Poly g = make_poly();
                g[Word{}] = 1;
                for (long long i = 0; i < n; ++i) g = times(g, f);
                f = g;
            }
            r = times(r, f);
            any = true;
        }
        if (!any) throw ParseError("empty term");
        return r;
    }
};

}  // namespace

NCCombination normalize(NCCombination e) {
    Poly acc = make_poly();
    for (const auto& t : e.terms) acc[t.word] += t.coeff;
    e.terms.clear();
    for (const auto& [w, c] : acc)
        if (c != 0) e.terms.push_back({c, w});
    std::sort(e.summed.begin(), e.summed.end());
    e.summed.erase(std::unique(e.summed.begin(), e.summed.end()), e.summed.end());
    return e;
}

NCCombination parse_combination(std::string_view s) {
    ExprParser parser{s, 0, {}};
    Poly poly = parser.expr();
    parser.skip();
    if (parser.p != s.size()) throw ParseError("unexpected character in expression: " + std::string(s.substr(parser.p)));
    NCCombination e;
    for (const auto& [w, c] : poly) e.terms.push_back({c, w});
    return normalize(std::move(e));
}

std::string to_string(const NCCombination& e) {
    if (e.terms.empty()) return "0";
    std::string out;
    for (const auto& t : e.terms) {
        const long long a = t.coeff < 0 ? -t.coeff : t.coeff;
        if (t.coeff < 0)
            out += "-";
        else if (!out.empty())
            out += "+";
        if (a != 1 || t.word.empty()) out += std::to_string(a);
        if (!t.word.empty()) out += word_to_string(t.word);
    }
    return out;
}

namespace {

// w without the pair, when v occurs exactly as one adjacent pair xx, zz* or z*z.
std::optional<Word> adjacent_pair(const Word& w, int v, bool complex) {
    std::vector<std::size_t> at;
    for (std::size_t p = 0; p < w.size(); ++p)
        if (w[p].var == v) at.push_back(p);
    if (at.size() != 2 || at[1] != at[0] + 1) return std::nullopt;
    if (complex && w[at[0]].star == w[at[1]].star) return std::nullopt;
    Word out;
    for (const auto& l : w)
        if (l.var != v) out.push_back(l);
    return out;
}

}  // namespace

Reduction reduce(const NCCombination& e, const RelationSystem& sys, Bounds bounds) {
    for (const auto& t : e.terms) {
        bounds.max_indices = std::max(bounds.max_indices, variable_count(t.word));
        bounds.max_degree = std::max(bounds.max_degree, static_cast<int>(t.word.size()));
    }
    const Saturation sat(sys, bounds);
    const bool twisted = sys.twisted();
    const bool complex = sys.field == Field::complex;
    Reduction out;
    out.truncated = sat.truncated();
    std::vector<std::pair<Word, Word>> facts;
    NCCombination acc;
    acc.summed = e.summed;

    struct Summed {
        std::size_t fact;  // w ~ src, or npos when w is src
        Word w, src, result;
        int var;
    };
    std::vector<Summed> sums;

    std::function<void(const Word&, long long)> add = [&](const Word& w, long long c) {
        for (int v : e.summed) {
            auto src = adjacent_pair(w, v, complex) ? std::optional<Word>(w) : sat.contraction_source(w, v);
            if (!src) continue;
            // The sign must not depend on whether v meets another variable.
            const int sign = word_sign(w, *src, twisted);
            bool uniform = true;
            for (const auto& other : w)
                if (other.var != v) {
                    Word mw = w, ms = *src;
                    for (auto* x : {&mw, &ms})
                        for (auto& l : *x)
                            if (l.var == v) l.var = other.var;
                    if (word_sign(mw, ms, twisted) != sign) uniform = false;
                }
            if (!uniform) continue;
            const Word cw = *src == w ? *adjacent_pair(w, v, complex) : *sat.contraction(w, v);
            std::size_t fact = std::string::npos;
            if (*src != w) {
                fact = facts.size();
                facts.emplace_back(w, *src);
            }
            sums.push_back({fact, w, *src, cw, v});
            add(cw, c * sign);
            return;
        }
        const Word r = sat.representative(w);
        if (r != w) facts.emplace_back(w, r);
        acc.terms.push_back({c * word_sign(w, r, twisted), r});
    };
    for (const auto& t : e.terms) add(t.word, t.coeff);
    out.result = normalize(std::move(acc));
    out.trace = sat.explain(facts);
    for (const auto& sm : sums) {
        std::vector<int> prem;
        if (sm.fact != std::string::npos) prem.push_back(out.trace.roots[sm.fact]);
        const int id = static_cast<int>(out.trace.steps.size());
        const std::string var(1, static_cast<char>('a' + sm.var));
        out.trace.steps.push_back({id, "sum_" + var + " " + word_to_string(sm.w) + "=" + word_to_string(sm.result),
                                   "contraction summing " + var, prem});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

Word identity_word(int k) {
    Word w(k);
    for (int p = 0; p < k; ++p) w[p] = {p, false};
    return w;
}

Word permuted_word(const Permutation& sigma) {
    Word w(sigma.size());
    for (std::size_t p = 0; p < sigma.size(); ++p) w[p] = {sigma[p], false};
    return w;
}

// Does the closure of sys contain the relation of every sigma in E?
bool derives_all(const RelationSystem& sys, const std::vector<Permutation>& E, Bounds b) {
    std::vector<std::pair<Word, Word>> goals;
    for (const auto& sigma : E)
        if (sigma != identity_permutation(static_cast<int>(sigma.size())))
            goals.emplace_back(identity_word(static_cast<int>(sigma.size())), permuted_word(sigma));
    if (goals.empty()) return true;
    const Saturation sat(sys, b, goals);
    for (const auto& [u, v] : goals)
        if (!sat.equivalent(u, v)) return false;
    return true;
}

}  // namespace

Classification classify_monomial_sphere(const std::vector<Permutation>& E, const Regime& r, Bounds bounds) {
    const Word ab = identity_word(2), ba = permuted_word({1, 0});
    const Word abc = identity_word(3), cba = permuted_word({2, 1, 0});
    bounds.max_indices = std::max(bounds.max_indices, 3);
    bounds.max_degree = std::max(bounds.max_degree, 4);
    const RelationSystem sys = monomial_system(E, r);
    const Saturation sat(sys, bounds, {{ab, ba}});

    Classification out;
    out.truncated = sat.truncated();
    auto level = [&](Level l) -> bool {
        return derives_all(sphere_relations(Spec(r.field, l, r.twisted)), E, bounds);
    };
    if (sat.equivalent(ab, ba) && level(Level::classical)) {
        out.sphere = Spec(r.field, Level::classical, r.twisted);
        out.certificate = sat.explain({{ab, ba}});
    } else if (sat.equivalent(abc, cba) && level(Level::half)) {
        out.sphere = Spec(r.field, Level::half, r.twisted);
        out.certificate = sat.explain({{abc, cba}});
    } else if (level(Level::free)) {
        out.sphere = Spec(r.field, Level::free);
    }
    return out;
}

RelationGroup relation_group(const RelationSystem& sys, int k, Bounds bounds) {
    if (k < 1) throw DomainError("k must be positive");
    bounds.max_indices = std::max(bounds.max_indices, k);
    bounds.max_degree = std::max(bounds.max_degree, k);
    const Saturation sat(sys, bounds);
    RelationGroup out;
    out.truncated = sat.truncated();
    const Word id = identity_word(k);
    for (const auto& sigma : all_permutations(k))
        if (sat.equivalent(id, permuted_word(sigma))) out.elements.push_back(sigma);
    const std::set<Permutation> members(out.elements.begin(), out.elements.end());
    out.closed = members.count(identity_permutation(k)) > 0;
    for (const auto& a : out.elements) {
        if (!members.count(inverse(a))) out.closed = false;
        for (const auto& b : out.elements)
            if (!members.count(compose(a, b))) out.closed = false;
    }
    return out;
}

}  // namespace ncs
