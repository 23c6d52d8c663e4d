#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "ncsphere/error.hpp"
#include "ncsphere/exact_matrix.hpp"
#include "ncsphere/models.hpp"
#include "ncsphere/partition.hpp"
#include "ncsphere/relations.hpp"
#include "ncsphere/spec.hpp"
#include "ncsphere/tensor.hpp"
#include "ncsphere/verify.hpp"
#include "ncsphere/weingarten.hpp"

namespace ncs::cli {

const std::vector<CommandInfo>& command_table() {
    static const std::vector<CommandInfo> table = {
        {"partitions",
         "enumerate a partition class over given rows",
         {"enumerate", "parse_partition_class", "to_string(PartitionClass)", "parse_colors", "colors_to_string",
          "Partition::to_string", "Partition::block_count", "is_noncrossing", "crossing_count"},
         {"--class", "NC2", "--k", "2", "--l", "2"}},
        {"signature",
         "signature, standard form, tensor map and diagram operations of a partition or permutation",
         {"Partition::parse", "Partition::blocks", "Partition::from_permutation", "is_member", "colors_compatible",
          "standard_form", "signature", "legal_switches", "apply_switch", "involution", "compose(Partition)",
          "tensor_concat", "join", "t_map", "xi_vector", "inner_product", "multiply", "kronecker",
          "SparseTensorMap::transpose", "SparseTensorMap::scaled", "dense", "kron", "delta", "kernel",
          "is_constant_on_blocks", "parse_permutation", "permutation_to_string", "is_permutation",
          "to_permutation", "permutation_sign", "inverse(Permutation)", "compose(Permutation)",
          "identity_permutation", "halfcommuting_membership", "relation_sign", "parse_regime"},
         {"--partition", "abab|", "--n", "2", "--regime", "real_twisted"}},
        {"gram",
         "Gram matrix of the category pairings, with rank, determinant and row sums",
         {"parse_spec", "group_name", "real_word", "category_pairings", "gram", "rank(ExactMatrix)",
          "determinant", "row_sum_profile", "ExactMatrix::to_strings"},
         {"--group", "u_n", "--alpha", "11**", "--n", "3"}},
        {"weingarten",
         "exact Weingarten matrix",
         {"weingarten_matrix", "inverse(ExactMatrix)"},
         {"--group", "o_n", "--k", "4", "--n", "5"}},
        {"moment",
         "Haar integral of a product of coordinates, exact or sampled",
         {"moment", "WeingartenTable", "WeingartenTable::deltas", "haar_moment_mc", "parse_haar_group",
          "to_string(HaarGroup)", "haar_orthogonal", "haar_unitary", "enumerate_signed_permutations",
          "enumerate_phase_permutations"},
         {"--group", "o_n", "--n", "3", "--i", "1,1,1,1", "--j", "1,1,2,2"}},
        {"trace",
         "trace of a product of sphere coordinates",
         {"sphere_trace", "sphere_name"},
         {"--sphere", "complex_half", "--n", "3", "--i", "1,1,2,2", "--alpha", "1*1*"}},
        {"rank",
         "rank of the degree-two products under the trace",
         {"gram_rank_products", "all_specs"},
         {"--sphere", "all", "--n", "3"}},
        {"classify",
         "sphere generated by monomial relations, or the relation group of a sphere",
         {"classify_monomial_sphere", "all_permutations", "relation_group", "sphere_relations", "regime_name"},
         {"--perm", "321", "--regime", "real"}},
        {"saturate",
         "closure of a relation system, with goals and word lookups",
         {"saturate", "Saturation", "Saturation::derived", "Saturation::equivalent", "Saturation::representative",
          "Saturation::contraction", "Saturation::contraction_source", "Saturation::explain",
          "Saturation::fact_count", "Saturation::truncated", "Saturation::stopped_early", "monomial_system",
          "parse_relation", "to_string(RelationSchema)", "describe", "parse_word", "word_to_string",
          "word_kernel", "matching_permutation", "word_sign"},
         {"--sphere", "real_half", "--degree", "4", "--indices", "3"}},
        {"reduce",
         "normal form of a polynomial modulo a relation system",
         {"parse_combination", "normalize", "reduce", "to_string(NCCombination)"},
         {"--expr", "(ab-ba)^2", "--perm", "21", "--regime", "real"}},
        {"check",
         "numerical checks on matrix models: relations, fixed vectors, intertwiners, coactions, sign tables",
         {"sphere_model", "sample_classical_point", "twisted_classical_points", "to_matrix_model",
          "antidiagonal_model", "pair_model", "clifford_twist", "free_model", "sqrt_positive_model",
          "check_sphere_relations", "check_schema", "check_fixed_vector_identity", "check_intertwiner",
          "SignedPermutation::matrix", "coaction_check", "transform", "span_sign_table", "comult_sign_check",
          "group_relations", "group_relation_sign"},
         {"--kind", "relations", "--sphere", "all", "--n", "3"}},
        {"verify",
         "run the acceptance checks",
         {"run_suite", "run_check", "check_name", "parse_suite", "to_string(Suite)", "suite_options"},
         {"--suite", "quick", "--check", "1"}},
    };
    return table;
}

namespace {

using json = nlohmann::ordered_json;

struct Flags {
    std::string group, sphere, alpha, beta, regime = "real", format, cls = "P", partition, other, i, j, tuple, expr,
        kind = "relations", model = "sphere", method = "exact", suite = "paper", word, sum, relation;
    std::vector<std::string> perms, relations, goals;
    int k = -1, l = 0, n = -1, d = 4, roots = 4, samples = -1, check = 0, report = 3, degree = -1, indices = -1;
    std::uint64_t seed = 0;
    double tol = default_tolerance, eps = 0.1;
    bool unconjugated = false, dense = false, trace = false, timing = false;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Output {
    json doc = json::object();
    Table table;
    std::string text;
    int code = exit_ok;
};

// Indices are 1-based on the command line: "1,2,2,1" or "1221".
IndexTuple parse_indices(const std::string& s) {
    std::vector<std::string> parts;
    if (s.find(',') != std::string::npos) {
        std::stringstream in(s);
        for (std::string item; std::getline(in, item, ',');) parts.push_back(item);
    } else {
        for (char c : s) parts.emplace_back(1, c);
    }
    IndexTuple t;
    for (const auto& item : parts) {
        if (item.empty() || !std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw ParseError("bad index list: " + s);
        const int v = std::stoi(item);
        if (v < 1) throw ParseError("indices start at 1: " + s);
        t.push_back(v - 1);
    }
    return t;
}

json indices_json(const IndexTuple& t) {
    json a = json::array();
    for (int x : t) a.push_back(x + 1);
    return a;
}

std::string indices_string(const IndexTuple& t) {
    std::string s;
    for (std::size_t p = 0; p < t.size(); ++p) s += (p ? "," : "") + std::to_string(t[p] + 1);
    return s;
}

std::string alpha_string(const ColorWord& a) {
    std::string s = colors_to_string(a);
    std::replace(s.begin(), s.end(), 'o', '1');
    return s;
}

json matrix_json(const ExactMatrix& m) { return json(m.to_strings()); }

Table matrix_table(const ExactMatrix& m) {
    Table t;
    for (int c = 0; c < m.cols(); ++c) t.header.push_back("c" + std::to_string(c + 1));
    t.rows = m.to_strings();
    return t;
}

json blocks_json(const Partition& p) {
    json a = json::array();
    for (const auto& b : p.blocks()) {
        json legs = json::array();
        for (int leg : b) legs.push_back(leg + 1);
        a.push_back(legs);
    }
    return a;
}

json tensor_json(const SparseTensorMap& m) {
    json entries = json::array();
    for (const auto& [key, c] : m.entries()) {
        const auto [out, in] = m.decode(key);
        entries.push_back(json::array({indices_json(out), indices_json(in), c}));
    }
    return {{"N", m.N()}, {"k", m.input_arity()}, {"l", m.output_arity()}, {"entries", entries}};
}

Table tensor_table(const SparseTensorMap& m) {
    Table t{{"out", "in", "coeff"}, {}};
    for (const auto& [key, c] : m.entries()) {
        const auto [out, in] = m.decode(key);
        t.rows.push_back({indices_string(out), indices_string(in), std::to_string(c)});
    }
    return t;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json model_json(const MatrixModel& m, bool point) {
    json data = json::array();
    for (const auto& x : m.z)
        for (int r = 0; r < x.rows(); ++r)
            for (int c = 0; c < x.cols(); ++c) data.push_back(complex_json(x(r, c)));
    return {{"kind", point ? "point" : "matrix"}, {"N", m.N()}, {"d", m.d()}, {"data", data}};
}

json trace_json(const Explanation& e) {
    json steps = json::array();
    for (const auto& s : e.steps)
        steps.push_back({{"id", s.id}, {"rule", s.rule}, {"premises", s.premises}, {"fact", s.fact}});
    return steps;
}

Table trace_table(const Explanation& e) {
    Table t{{"id", "rule", "premises", "fact"}, {}};
    for (const auto& s : e.steps) {
        std::string prem;
        for (std::size_t p = 0; p < s.premises.size(); ++p) prem += (p ? " " : "") + std::to_string(s.premises[p]);
        t.rows.push_back({std::to_string(s.id), s.rule, prem, s.fact});
    }
    return t;
}

Spec required_spec(const std::string& name, const char* flag) {
    if (name.empty()) throw ParseError(std::string(flag) + " is required");
    return parse_spec(name);
}

int required_n(const Flags& f) {
    if (f.n < 1) throw ParseError("--n is required and must be positive");
    return f.n;
}

ColorWord word_for(const GroupSpec& g, const Flags& f) {
    if (!f.alpha.empty()) return parse_colors(f.alpha);
    if (g.field == Field::complex) throw ParseError("complex groups need --alpha");
    if (f.k < 0) throw ParseError("--k or --alpha is required");
    return real_word(f.k);
}

Bounds bounds_for(const Flags& f) {
    Bounds b;
    if (f.degree > 0) b.max_degree = f.degree;
    if (f.indices > 0) b.max_indices = f.indices;
    return b;
}

json bounds_json(const Bounds& b) { return {{"degree", b.max_degree}, {"indices", b.max_indices}}; }

// Both words parsed together so they share variable numbering.
std::pair<Word, Word> parse_equation(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected u=v: " + s);
    const std::string u = s.substr(0, eq), v = s.substr(eq + 1);
    const Word both = parse_word(u + v);
    const auto cut = static_cast<std::ptrdiff_t>(parse_word(u).size());
    return {Word(both.begin(), both.begin() + cut), Word(both.begin() + cut, both.end())};
}

// Variable number of a letter, counted by first appearance in s.
int variable_of(const std::string& s, const std::string& letter) {
    if (letter.size() != 1) throw ParseError("--sum takes one letter");
    std::vector<char> seen;
    for (char c : s)
        if (c >= 'a' && c <= 'z' && std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
    const auto it = std::find(seen.begin(), seen.end(), letter[0]);
    if (it == seen.end()) throw ParseError("letter " + letter + " does not occur");
    return static_cast<int>(it - seen.begin());
}

std::vector<Permutation> parse_perms(const Flags& f) {
    std::vector<Permutation> E;
    for (const auto& w : f.perms) {
        if (w == "all") {
            if (f.k < 1) throw ParseError("--perm all needs --k");
            for (const auto& s : all_permutations(f.k)) E.push_back(s);
            continue;
        }
        const Permutation s = parse_permutation(w);
        if (!is_permutation(s)) throw ParseError("not a permutation: " + w);
        E.push_back(s);
    }
    return E;
}

RelationSystem system_for(const Flags& f, std::string& label) {
    const int sources = !f.sphere.empty() + (!f.perms.empty() || !f.relations.empty());
    if (sources != 1) throw ParseError("give exactly one of --sphere, --perm/--relation");
    if (!f.sphere.empty()) {
        const Spec s = parse_spec(f.sphere);
        label = sphere_name(s);
        return sphere_relations(s);
    }
    const Regime r = parse_regime(f.regime);
    RelationSystem sys = monomial_system(parse_perms(f), r);
    for (const auto& lit : f.relations) sys.schemas.push_back(parse_relation(lit, r));
    label = regime_name(r);
    return sys;
}

std::string perm_string(const Permutation& s) { return permutation_to_string(s); }

// partitions

Output cmd_partitions(const Flags& f) {
    Output o;
    const PartitionClass c = parse_partition_class(f.cls);
    std::vector<Partition> ps;
    o.doc["class"] = to_string(c);
    if (!f.alpha.empty() || !f.beta.empty()) {
        const ColorWord up = parse_colors(f.alpha), lo = parse_colors(f.beta);
        ps = enumerate(c, up, lo);
        o.doc["upper"] = colors_to_string(up);
        o.doc["lower"] = colors_to_string(lo);
    } else {
        if (f.k < 0) throw ParseError("--k or --alpha is required");
        ps = enumerate(c, f.k, f.l);
        o.doc["upper"] = f.k;
        o.doc["lower"] = f.l;
    }
    o.doc["count"] = ps.size();
    json list = json::array();
    o.table.header = {"literal", "blocks", "noncrossing", "crossings"};
    for (const auto& p : ps) {
        const auto sizes = p.block_sizes();
        const bool pairing = std::all_of(sizes.begin(), sizes.end(), [](int s) { return s == 2; });
        json cr = pairing ? json(crossing_count(p)) : json(nullptr);
        list.push_back({{"literal", p.to_string()},
                        {"blocks", p.block_count()},
                        {"noncrossing", is_noncrossing(p)},
                        {"crossings", cr}});
        o.table.rows.push_back({p.to_string(), std::to_string(p.block_count()), is_noncrossing(p) ? "true" : "false",
                                pairing ? std::to_string(crossing_count(p)) : ""});
    }
    o.doc["partitions"] = list;
    return o;
}

// signature

json dense_json(const CMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(static_cast<long long>(std::llround(m(r, c).real())));
        rows.push_back(row);
    }
    return rows;
}

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

Output cmd_signature(const Flags& f) {
    Output o;
    const Regime r = parse_regime(f.regime);
    o.table.header = {"key", "value"};
    auto row = [&](const std::string& key, const json& v) {
        o.doc[key] = v;
        o.table.rows.push_back({key, v.is_string() ? v.get<std::string>() : v.dump()});
    };
    if (f.perms.size() > 2) throw ParseError("signature takes at most two --perm words");
    std::optional<Partition> p;
    if (!f.perms.empty()) {
        const Permutation s = parse_permutation(f.perms[0]);
        if (!is_permutation(s)) throw ParseError("not a permutation: " + f.perms[0]);
        const Partition ps = Partition::from_permutation(s);
        row("perm", perm_string(s));
        row("perm_partition", ps.to_string());
        row("perm_roundtrip", perm_string(to_permutation(ps)));
        row("perm_sign", permutation_sign(s));
        row("perm_inverse", perm_string(inverse(s)));
        int order = 1;
        for (Permutation x = s; x != identity_permutation(static_cast<int>(s.size())); x = compose(s, x)) ++order;
        row("perm_order", order);
        row("halfcommuting", halfcommuting_membership(s));
        if (!f.tuple.empty()) {
            const IndexTuple t = parse_indices(f.tuple);
            row("relation_sign", relation_sign(s, t, r.twisted));
        }
        if (f.perms.size() == 2) {
            const Permutation s2 = parse_permutation(f.perms[1]);
            if (!is_permutation(s2) || s2.size() != s.size()) throw ParseError("bad second permutation");
            row("perm_product", perm_string(compose(s, s2)));
        }
        if (f.partition.empty()) p = ps;
    }
    if (!f.partition.empty()) p = Partition::parse(f.partition);
    if (!p) {
        if (f.tuple.empty()) throw ParseError("--partition, --perm or --tuple is required");
        row("kernel", kernel(parse_indices(f.tuple)).to_string());
        return o;
    }

    row("partition", p->to_string());
    row("upper", p->upper());
    row("lower", p->lower());
    row("blocks", blocks_json(*p));
    json classes = json::array();
    for (PartitionClass c : {PartitionClass::P, PartitionClass::P_even, PartitionClass::P2, PartitionClass::NC,
                             PartitionClass::NC_even, PartitionClass::NC2, PartitionClass::P2_star,
                             PartitionClass::Perm})
        if (is_member(*p, c)) classes.push_back(to_string(c));
    row("classes", classes);
    row("colors_compatible", colors_compatible(*p));
    row("noncrossing", is_noncrossing(*p));
    const auto sizes = p->block_sizes();
    if (std::all_of(sizes.begin(), sizes.end(), [](int s) { return s % 2 == 0; })) {
        const StandardForm sf = standard_form(*p);
        row("signature", signature(*p));
        row("standard_form", sf.partition.to_string());
        row("switch_count", sf.switch_count);
    }
    json switches = json::array();
    for (int leg : legal_switches(*p))
        switches.push_back({{"leg", leg + 1}, {"result", apply_switch(*p, leg).to_string()}});
    row("switches", switches);
    row("involution", involution(*p).to_string());

    std::optional<Partition> q;
    if (!f.other.empty()) {
        q = Partition::parse(f.other);
        row("other", q->to_string());
        row("tensor_product", tensor_concat(*p, *q).to_string());
        if (p->lower() == q->upper()) {
            const Composition c = compose(*p, *q);
            row("composition", json{{"partition", c.partition.to_string()}, {"loops", c.loops}});
        }
        if (p->upper() == q->upper() && p->lower() == q->lower()) {
            const JoinResult jn = join(*p, *q);
            row("join", json{{"partition", jn.partition.to_string()}, {"blocks", jn.block_count}});
        }
    }
    if (!f.tuple.empty()) {
        const IndexTuple t = parse_indices(f.tuple);
        if (static_cast<int>(t.size()) != p->legs()) throw FrameError("--tuple needs one index per leg");
        row("delta", delta(*p, t, r.twisted));
        row("kernel", kernel(t, p->upper(), p->lower()).to_string());
        row("constant_on_blocks", is_constant_on_blocks(*p, t));
    }
    if (f.n > 0) {
        const int N = f.n;
        const SparseTensorMap m = t_map(*p, N, r.twisted);
        o.doc["twisted"] = r.twisted;
        o.doc["tensor"] = tensor_json(m);
        o.table = tensor_table(m);
        if (f.dense) o.doc["matrix"] = dense_json(dense(m));
        if (p->upper() == 0) {
            const FixedVector xi = xi_vector(*p, N, r.twisted);
            o.doc["norm_squared"] = inner_product(xi, xi);
            if (q && q->upper() == 0 && q->lower() == p->lower())
                o.doc["inner_product"] = inner_product(xi, xi_vector(*q, N, r.twisted));
        }
        json fun = json::object();
        fun["involution"] = t_map(involution(*p), N, r.twisted) == m.transpose();
        if (q) {
            const SparseTensorMap mq = t_map(*q, N, r.twisted);
            const SparseTensorMap mt = t_map(tensor_concat(*p, *q), N, r.twisted);
            fun["tensor"] = mt == kronecker(m, mq);
            if (f.dense) fun["dense_tensor"] = (dense(mt) - kron(dense(m), dense(mq))).norm() == 0;
            if (p->lower() == q->upper()) {
                const Composition c = compose(*p, *q);
                fun["composition"] = multiply(mq, m) == t_map(c.partition, N, r.twisted).scaled(ipow(N, c.loops));
            }
        }
        o.doc["functoriality"] = fun;
    }
    return o;
}

// gram, weingarten

json pairings_json(const std::vector<Partition>& ps) {
    json a = json::array();
    for (const auto& p : ps) a.push_back(p.to_string());
    return a;
}

Output cmd_gram(const Flags& f) {
    Output o;
    const GroupSpec g = required_spec(f.group, "--group");
    const int N = required_n(f);
    const ColorWord a = word_for(g, f);
    const ExactMatrix G = gram(g, a, N);
    o.doc["group"] = group_name(g);
    o.doc["alpha"] = alpha_string(a);
    o.doc["N"] = N;
    o.doc["pairings"] = pairings_json(category_pairings(g, a));
    o.doc["gram"] = matrix_json(G);
    o.doc["rank"] = rank(G);
    o.doc["determinant"] = determinant(G).get_str();
    json sums = json::array();
    for (const auto& s : row_sum_profile(G)) sums.push_back(s.get_str());
    o.doc["row_sums"] = sums;
    o.table = matrix_table(G);
    return o;
}

Output cmd_weingarten(const Flags& f) {
    Output o;
    const GroupSpec g = required_spec(f.group, "--group");
    const int N = required_n(f);
    const ColorWord a = word_for(g, f);
    const ExactMatrix G = gram(g, a, N);
    const ExactMatrix W = weingarten_matrix(g, a, N);
    o.doc["group"] = group_name(g);
    o.doc["alpha"] = alpha_string(a);
    o.doc["N"] = N;
    o.doc["gram"] = matrix_json(G);
    o.doc["weingarten"] = matrix_json(W);
    o.table = matrix_table(W);
    return o;
}

// moment, trace, rank

Output cmd_moment(const Flags& f) {
    Output o;
    const int N = required_n(f);
    const IndexTuple i = parse_indices(f.i), j = parse_indices(f.j);
    if (i.empty() || i.size() != j.size()) throw ParseError("--i and --j need the same nonzero length");
    if (f.method == "mc") {
        const HaarGroup h = parse_haar_group(f.group);
        const ColorWord a = parse_colors(f.alpha);
        const long samples = f.samples > 0 ? f.samples : 100000;
        const MCEstimate e = haar_moment_mc(h, N, i, j, a, samples, f.seed);
        o.doc["group"] = to_string(h);
        o.doc["N"] = N;
        o.doc["i"] = indices_json(i);
        o.doc["j"] = indices_json(j);
        o.doc["alpha"] = alpha_string(a);
        o.doc["seed"] = f.seed;
        o.doc["mean"] = complex_json(e.mean);
        o.doc["standard_error"] = e.standard_error;
        o.doc["samples"] = e.samples;
        o.doc["exact"] = e.exact;
        std::optional<GroupSpec> g;
        if (h == HaarGroup::orthogonal) g = GroupSpec(Field::real, Level::classical);
        if (h == HaarGroup::unitary && !a.empty()) g = GroupSpec(Field::complex, Level::classical);
        if (g) o.doc["reference"] = moment(*g, N, i, j, g->field == Field::real ? real_word(i.size()) : a).get_str();
        o.table = {{"mean_re", "mean_im", "standard_error", "samples"},
                   {{json(e.mean.real()).dump(), json(e.mean.imag()).dump(), json(e.standard_error).dump(),
                     std::to_string(e.samples)}}};
        return o;
    }
    if (f.method != "exact") throw ParseError("--method is exact or mc");
    const GroupSpec g = required_spec(f.group, "--group");
    ColorWord a;
    if (!f.alpha.empty())
        a = parse_colors(f.alpha);
    else if (g.field == Field::real)
        a = real_word(static_cast<int>(i.size()));
    else
        throw ParseError("complex groups need --alpha");
    const WeingartenTable tab(g, a, N);
    const mpq_class value = moment(g, N, i, j, a);
    o.doc["group"] = group_name(g);
    o.doc["N"] = N;
    o.doc["i"] = indices_json(i);
    o.doc["j"] = indices_json(j);
    o.doc["alpha"] = alpha_string(a);
    o.doc["pairings"] = pairings_json(tab.pairings());
    o.doc["row_deltas"] = tab.deltas(i);
    o.doc["column_deltas"] = tab.deltas(j);
    o.doc["moment"] = value.get_str();
    o.table = {{"moment"}, {{value.get_str()}}};
    return o;
}

Output cmd_trace(const Flags& f) {
    Output o;
    const SphereSpec s = required_spec(f.sphere, "--sphere");
    const int N = required_n(f);
    const IndexTuple i = parse_indices(f.i);
    const ColorWord a = f.alpha.empty() ? real_word(static_cast<int>(i.size())) : parse_colors(f.alpha);
    const mpq_class t = sphere_trace(s, N, i, a);
    o.doc["sphere"] = sphere_name(s);
    o.doc["N"] = N;
    o.doc["i"] = indices_json(i);
    o.doc["alpha"] = alpha_string(a);
    o.doc["trace"] = t.get_str();
    o.table = {{"trace"}, {{t.get_str()}}};
    return o;
}

Output cmd_rank(const Flags& f) {
    Output o;
    const int N = required_n(f);
    const bool conj = !f.unconjugated;
    std::vector<Spec> specs;
    if (f.sphere.empty() || f.sphere == "all")
        specs = all_specs();
    else
        specs = {parse_spec(f.sphere)};
    o.doc["N"] = N;
    o.doc["conjugated"] = conj;
    json ranks = json::array();
    o.table.header = {"sphere", "rank"};
    for (const auto& s : specs) {
        const int rk = gram_rank_products(s, N, conj);
        ranks.push_back({{"sphere", sphere_name(s)}, {"rank", rk}});
        o.table.rows.push_back({sphere_name(s), std::to_string(rk)});
    }
    o.doc["ranks"] = ranks;
    return o;
}

// classify, saturate, reduce

Output cmd_classify(const Flags& f) {
    Output o;
    const Bounds b = bounds_for(f);
    if (!f.perms.empty()) {
        if (!f.sphere.empty()) throw ParseError("--perm excludes --sphere");
        const Regime r = parse_regime(f.regime);
        const Classification c = classify_monomial_sphere(parse_perms(f), r, b);
        const std::string name = c.sphere ? sphere_name(*c.sphere) : "undetermined";
        o.doc["sphere"] = name;
        if (!c.sphere) o.doc["truncated"] = c.truncated;
        o.table = {{"sphere"}, {{name}}};
        if (f.trace) {
            o.doc["certificate"] = trace_json(c.certificate);
            o.table = trace_table(c.certificate);
        }
        return o;
    }
    if (f.k < 1) throw ParseError("classify needs --perm, or --sphere with --k");
    std::string label;
    const RelationSystem sys = system_for(f, label);
    const RelationGroup g = relation_group(sys, f.k, b);
    o.doc["system"] = label;
    o.doc["k"] = f.k;
    o.doc["order"] = g.elements.size();
    o.doc["closed"] = g.closed;
    o.doc["truncated"] = g.truncated;
    json el = json::array();
    o.table.header = {"perm"};
    for (const auto& s : g.elements) {
        el.push_back(perm_string(s));
        o.table.rows.push_back({perm_string(s)});
    }
    o.doc["elements"] = el;
    return o;
}

json schemas_json(const std::vector<RelationSchema>& ss, Table& t) {
    json a = json::array();
    t.header = {"relation"};
    for (const auto& s : ss) {
        a.push_back(to_string(s));
        t.rows.push_back({to_string(s)});
    }
    return a;
}

Output cmd_saturate(const Flags& f) {
    Output o;
    std::string label;
    const RelationSystem sys = system_for(f, label);
    const Bounds b = bounds_for(f);
    o.doc["system"] = label;
    o.doc["bounds"] = bounds_json(b);
    o.doc["describe"] = describe(sys);
    if (f.goals.empty() && f.word.empty()) {
        o.doc["relations"] = schemas_json(saturate(sys, b, f.report), o.table);
        return o;
    }
    std::vector<std::pair<Word, Word>> goals;
    for (const auto& g : f.goals) goals.push_back(parse_equation(g));
    const Saturation sat(sys, b, goals);
    o.doc["relations"] = schemas_json(sat.derived(f.report), o.table);
    o.doc["facts"] = sat.fact_count();
    o.doc["truncated"] = sat.truncated();
    if (!goals.empty()) {
        json gs = json::array();
        std::vector<std::pair<Word, Word>> held;
        for (std::size_t p = 0; p < goals.size(); ++p) {
            const auto& [u, v] = goals[p];
            const bool ok = sat.equivalent(u, v);
            json entry = {{"goal", word_to_string(u) + "=" + word_to_string(v)}, {"holds", ok}};
            if (ok) {
                entry["sign"] = word_sign(u, v, sys.twisted());
                held.push_back(goals[p]);
            }
            gs.push_back(entry);
        }
        o.doc["stopped_early"] = sat.stopped_early();
        o.doc["goals"] = gs;
        const Explanation e = sat.explain(held);
        o.doc["trace"] = trace_json(e);
        o.table = trace_table(e);
        if (held.size() != goals.size()) o.code = exit_verification;
    }
    if (!f.word.empty()) {
        const Word w = parse_word(f.word);
        const Word rep = sat.representative(w);
        json wj = {{"word", word_to_string(w)}, {"kernel", word_kernel(w)}, {"representative", word_to_string(rep)}};
        if (const auto m = matching_permutation(rep, w)) {
            wj["permutation"] = perm_string(*m);
            wj["sign"] = word_sign(w, rep, sys.twisted());
        }
        if (!f.sum.empty()) {
            const int var = variable_of(f.word, f.sum);
            const auto c = sat.contraction(w, var);
            const auto src = sat.contraction_source(w, var);
            wj["contraction"] = c ? json(word_to_string(*c)) : json(nullptr);
            wj["contraction_source"] = src ? json(word_to_string(*src)) : json(nullptr);
        }
        o.doc["word"] = wj;
    }
    return o;
}

Output cmd_reduce(const Flags& f) {
    Output o;
    if (f.expr.empty()) throw ParseError("--expr is required");
    std::string label;
    const RelationSystem sys = system_for(f, label);
    const Bounds b = bounds_for(f);
    NCCombination e = parse_combination(f.expr);
    if (!f.sum.empty()) e.summed.push_back(variable_of(f.expr, f.sum));
    e = normalize(e);
    const Reduction red = reduce(e, sys, b);
    o.doc["system"] = label;
    o.doc["bounds"] = bounds_json(b);
    o.doc["input"] = to_string(e);
    o.doc["result"] = to_string(red.result);
    o.doc["zero"] = red.result.is_zero();
    o.doc["truncated"] = red.truncated;
    o.doc["trace"] = trace_json(red.trace);
    o.table = trace_table(red.trace);
    return o;
}

// check

struct ModelCase {
    std::string label;
    MatrixModel m;
    std::optional<PointModel> point;
};

std::vector<ModelCase> build_models(const Flags& f, const SphereSpec& s, int N, json& extra) {
    const std::uint64_t seed = f.seed;
    std::vector<ModelCase> out;
    auto point = [&](const std::string& label, const PointModel& p) { out.push_back({label, to_matrix_model(p), p}); };
    if (f.model == "sphere") {
        out.push_back({"sphere", sphere_model(s, N, seed), std::nullopt});
    } else if (f.model == "point") {
        point("point", sample_classical_point(s.field, N, seed));
    } else if (f.model == "twisted") {
        const auto pts = twisted_classical_points(s.field, N, seed);
        for (std::size_t p = 0; p < pts.size(); ++p) point("twisted " + std::to_string(p + 1), pts[p]);
    } else if (f.model == "antidiagonal") {
        out.push_back({"antidiagonal", antidiagonal_model(sample_classical_point(Field::complex, N, seed)), {}});
    } else if (f.model == "pair") {
        out.push_back({"pair",
                       pair_model(sample_classical_point(Field::complex, N, seed),
                                  sample_classical_point(Field::complex, N, seed ^ 0x9e3779b97f4a7c15ULL)),
                       {}});
    } else if (f.model == "clifford") {
        out.push_back({"clifford", clifford_twist(sphere_model(Spec(s.field, s.level, false), N, seed)), {}});
    } else if (f.model == "free") {
        out.push_back({"free", free_model(s.field, N, f.d, seed), {}});
    } else if (f.model == "sqrt") {
        std::vector<double> r(N, 1.0 / N), sd(N, 1.0 / N);
        std::vector<cplx> z(N);
        for (int p = 0; p < N; ++p) z[p] = std::polar(f.eps, 2 * std::numbers::pi * p / N);
        const SqrtModel sm = sqrt_positive_model(r, sd, z);
        extra["commutator_norms"] = sm.commutator_norms;
        out.push_back({"sqrt", sm.model, {}});
    } else {
        throw ParseError("unknown model: " + f.model);
    }
    return out;
}

std::vector<Spec> spheres_for(const Flags& f) {
    if (f.sphere == "all") return all_specs();
    return {required_spec(f.sphere, "--sphere")};
}

json violations_json(const std::vector<Violation>& vs) {
    json a = json::array();
    for (const auto& v : vs)
        a.push_back({{"relation", v.relation}, {"indices", indices_json(v.indices)}, {"residual", v.residual}});
    return a;
}

std::vector<CMatrix> group_elements(HaarGroup h, int N, int samples, int roots, std::uint64_t seed) {
    std::vector<CMatrix> out;
    if (h == HaarGroup::hyperoctahedral) {
        for (const auto& g : enumerate_signed_permutations(N)) out.push_back(g.matrix());
    } else if (h == HaarGroup::K_N) {
        for (const auto& g : enumerate_phase_permutations(N, roots)) out.push_back(g.matrix());
    } else {
        std::mt19937_64 rng(seed);
        for (int p = 0; p < samples; ++p)
            out.push_back(h == HaarGroup::orthogonal ? haar_orthogonal(N, rng) : haar_unitary(N, rng));
    }
    return out;
}

Output cmd_check(const Flags& f) {
    Output o;
    o.doc["kind"] = f.kind;
    bool passed = true;
    if (f.kind == "relations" || f.kind == "fixed-vector" || f.kind == "coaction") {
        const int N = required_n(f);
        std::optional<Partition> p;
        if (f.kind == "fixed-vector") {
            if (f.partition.empty()) throw ParseError("--partition is required");
            p = Partition::parse(f.partition);
            o.doc["partition"] = p->to_string();
        }
        json results = json::array();
        o.table.header = {"sphere", "model", "result"};
        for (const auto& s : spheres_for(f)) {
            json extra = json::object();
            const auto models = build_models(f, s, N, extra);
            std::vector<CMatrix> gs;
            if (f.kind == "coaction") {
                const HaarGroup h = f.group.empty()
                                        ? (s.field == Field::real ? HaarGroup::orthogonal : HaarGroup::unitary)
                                        : parse_haar_group(f.group);
                gs = group_elements(h, N, f.samples > 0 ? f.samples : 20, f.roots, f.seed + 1);
                extra["group"] = to_string(h);
                extra["elements"] = gs.size();
            }
            for (const auto& mc : models) {
                json r = {{"sphere", sphere_name(s)}, {"model", mc.label}};
                for (auto it = extra.begin(); it != extra.end(); ++it) r[it.key()] = it.value();
                r["data"] = model_json(mc.m, mc.point.has_value());
                std::string summary;
                if (f.kind == "relations") {
                    std::vector<Violation> vs;
                    if (!f.relation.empty())
                        vs = check_schema(mc.m, parse_relation(f.relation, Regime{s.field, s.twisted}), s.twisted, f.tol);
                    else if (mc.point)
                        vs = check_sphere_relations(*mc.point, s, f.tol);
                    else
                        vs = check_sphere_relations(mc.m, s, f.tol);
                    r["violations"] = violations_json(vs);
                    r["satisfied"] = vs.empty();
                    passed &= vs.empty();
                    summary = vs.empty() ? "satisfied" : std::to_string(vs.size()) + " violations";
                } else if (f.kind == "fixed-vector") {
                    const double res = mc.point ? check_fixed_vector_identity(*p, *mc.point, s.twisted)
                                                : check_fixed_vector_identity(*p, mc.m, s.twisted);
                    r["residual"] = res;
                    passed &= res < f.tol;
                    summary = json(res).dump();
                } else {
                    int ok = 0;
                    double worst = 0;
                    for (const auto& g : gs) {
                        const bool good = mc.point ? coaction_check(g, *mc.point, s, f.tol) : coaction_check(g, mc.m, s, f.tol);
                        ok += good;
                        for (const auto& v : check_sphere_relations(transform(g, mc.m), s, 0))
                            worst = std::max(worst, v.residual);
                    }
                    r["preserved"] = ok;
                    r["max_residual"] = worst;
                    passed &= ok == static_cast<int>(gs.size());
                    summary = std::to_string(ok) + "/" + std::to_string(gs.size());
                }
                o.table.rows.push_back({sphere_name(s), mc.label, summary});
                results.push_back(r);
            }
        }
        o.doc["results"] = results;
    } else if (f.kind == "intertwiner") {
        const int N = required_n(f);
        if (f.partition.empty()) throw ParseError("--partition is required");
        const Partition p = Partition::parse(f.partition);
        const Regime r = parse_regime(f.regime);
        const HaarGroup h = parse_haar_group(f.group.empty() ? "orthogonal" : f.group);
        const auto gs = group_elements(h, N, f.samples > 0 ? f.samples : 20, f.roots, f.seed);
        int ok = 0;
        for (const auto& g : gs) ok += check_intertwiner(p, g, r.twisted, f.tol);
        o.doc["partition"] = p.to_string();
        o.doc["group"] = to_string(h);
        o.doc["N"] = N;
        o.doc["twisted"] = r.twisted;
        o.doc["tested"] = gs.size();
        o.doc["intertwining"] = ok;
        passed = ok == static_cast<int>(gs.size());
        o.table = {{"tested", "intertwining"}, {{std::to_string(gs.size()), std::to_string(ok)}}};
    } else if (f.kind == "sign-table") {
        const GroupSpec g = required_spec(f.group, "--group");
        const SignTable t = span_sign_table();
        passed = comult_sign_check(g, t);
        json rows = json::array();
        o.table.header = {"rows", "cols1", "cols2", "cols3"};
        for (int a = 0; a < 3; ++a) {
            rows.push_back(t[a]);
            o.table.rows.push_back({std::to_string(a + 1), std::to_string(t[a][0]), std::to_string(t[a][1]),
                                    std::to_string(t[a][2])});
        }
        o.doc["group"] = group_name(g);
        o.doc["table"] = rows;
    } else if (f.kind == "group-sign") {
        const GroupSpec g = required_spec(f.group, "--group");
        if (f.perms.size() != 1) throw ParseError("--perm is required");
        const Permutation s = parse_permutation(f.perms[0]);
        const IndexTuple rows = parse_indices(f.i), cols = parse_indices(f.j);
        const RelationSystem sys = group_relations(g);
        const int sign = group_relation_sign(sys, s, rows, cols);
        o.doc["group"] = group_name(g);
        o.doc["describe"] = describe(sys);
        o.doc["perm"] = perm_string(s);
        o.doc["rows"] = indices_json(rows);
        o.doc["cols"] = indices_json(cols);
        o.doc["sign"] = sign;
        o.table = {{"sign"}, {{std::to_string(sign)}}};
    } else {
        throw ParseError("unknown check kind: " + f.kind);
    }
    o.doc["passed"] = passed;
    if (!passed) o.code = exit_verification;
    return o;
}

// verify

Output cmd_verify(const Flags& f) {
    Output o;
    const Suite s = parse_suite(f.suite);
    VerifyOptions opt;
    opt.tol = f.tol;
    opt.seed = f.seed;
    if (f.samples > 0) opt.mc_samples = f.samples;
    SuiteReport report;
    report.suite = s;
    if (f.check != 0) {
        if (f.check < 1 || f.check > check_count) throw ParseError("--check is 1.." + std::to_string(check_count));
        report.checks.push_back(run_check(f.check, suite_options(s, opt)));
    } else {
        report = run_suite(s, opt);
    }
    o.doc["suite"] = to_string(s);
    o.doc["passed"] = report.passed();
    json checks = json::array();
    o.table.header = {"id", "name", "result", "detail"};
    if (f.timing) o.table.header.push_back("seconds");
    std::ostringstream text;
    int npass = 0;
    for (const auto& c : report.checks) {
        json cj = {{"id", c.id}, {"name", check_name(c.id)}, {"passed", c.passed}, {"detail", c.detail}};
        if (f.timing) cj["seconds"] = c.seconds;
        json est = json::array();
        for (const auto& e : c.estimates)
            est.push_back({{"label", e.label},
                           {"exact", e.exact},
                           {"mean", e.mean},
                           {"standard_error", e.standard_error},
                           {"samples", e.samples}});
        if (!est.empty()) cj["estimates"] = est;
        checks.push_back(cj);
        std::vector<std::string> row = {std::to_string(c.id), c.name, c.passed ? "PASS" : "FAIL", c.detail};
        text << (c.passed ? "PASS" : "FAIL") << "  C" << c.id << "  " << c.name << "  " << c.detail;
        if (f.timing) {
            row.push_back(json(c.seconds).dump());
            text << "  (" << c.seconds << " s)";
        }
        text << '\n';
        o.table.rows.push_back(row);
        npass += c.passed;
    }
    o.doc["checks"] = checks;
    text << npass << " of " << report.checks.size() << " checks passed\n";
    o.text = text.str();
    if (!report.passed()) o.code = exit_verification;
    return o;
}

// Scalars and arrays of them stay on one line.
bool flat(const json& j) {
    if (j.is_object()) return j.empty();
    if (!j.is_array()) return true;
    return std::all_of(j.begin(), j.end(), [](const json& x) { return flat(x); });
}

void write_json(const json& j, std::ostream& out, int indent = 0) {
    const std::string pad(indent + 2, ' ');
    if (flat(j)) {
        if (!j.is_array()) {
            out << j.dump();
            return;
        }
        out << '[';
        for (std::size_t p = 0; p < j.size(); ++p) {
            if (p) out << ", ";
            write_json(j[p], out, indent);
        }
        out << ']';
        return;
    }
    const bool object = j.is_object();
    out << (object ? '{' : '[') << '\n';
    std::size_t p = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++p) {
        out << pad;
        if (object) out << json(it.key()).dump() << ": ";
        write_json(*it, out, indent + 2);
        out << (p + 1 < j.size() ? ",\n" : "\n");
    }
    out << std::string(indent, ' ') << (object ? '}' : ']');
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

void write_csv(const Table& t, std::ostream& out) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t p = 0; p < cells.size(); ++p) out << (p ? "," : "") << csv_field(cells[p]);
        out << '\n';
    };
    if (!t.header.empty()) line(t.header);
    for (const auto& r : t.rows) line(r);
}

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--format", f.format, "json or csv (verify also: table)")
        ->check(CLI::IsMember({"json", "csv", "table"}));
}

void add_system(CLI::App* sub, Flags& f) {
    sub->add_option("--sphere", f.sphere, "sphere name, e.g. real_half");
    sub->add_option("--perm", f.perms, "one-line permutation words")->delimiter(',');
    sub->add_option("--relation", f.relations, "relation literal, e.g. abc=+cba");
    sub->add_option("--regime", f.regime, "real, complex, real_twisted or complex_twisted");
    sub->add_option("--degree", f.degree, "maximal word degree");
    sub->add_option("--indices", f.indices, "maximal number of distinct variables");
    sub->add_option("--k", f.k, "permutation size for --perm all");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Partitions, Weingarten calculus and monomial relations of the noncommutative spheres", "ncsphere"};
    app.require_subcommand(1, 1);
    std::map<std::string, CLI::App*> subs;
    for (const auto& c : command_table()) subs[c.name] = app.add_subcommand(c.name, c.summary);

    auto* s = subs["partitions"];
    s->add_option("--class", f.cls, "P, P_even, P2, NC, NC_even, NC2, P2_star or Perm");
    s->add_option("--k", f.k, "upper legs");
    s->add_option("--l", f.l, "lower legs");
    s->add_option("--alpha", f.alpha, "upper colors, e.g. 1*");
    s->add_option("--beta", f.beta, "lower colors");

    s = subs["signature"];
    s->add_option("--partition", f.partition, "literal, e.g. ab|ba or |abab:11**");
    s->add_option("--other", f.other, "second partition for products");
    s->add_option("--perm", f.perms, "one-line permutation word (twice for a product)");
    s->add_option("--tuple", f.tuple, "index tuple over all legs, 1-based");
    s->add_option("--n", f.n, "dimension for the tensor map");
    s->add_option("--regime", f.regime, "twisted regimes use signed Kronecker symbols");
    s->add_flag("--dense", f.dense, "also print the dense matrix");

    for (const char* name : {"gram", "weingarten"}) {
        s = subs[name];
        s->add_option("--group", f.group, "o_n, o_n_star, o_n_plus, bar_o_n, ..., u_n_plus");
        s->add_option("--k", f.k, "number of legs (real groups)");
        s->add_option("--alpha", f.alpha, "colors, e.g. 11**");
        s->add_option("--n", f.n, "dimension");
    }

    s = subs["moment"];
    s->add_option("--group", f.group, "group name; for --method mc orthogonal, unitary, hyperoctahedral or K_N");
    s->add_option("--n", f.n, "dimension");
    s->add_option("--i", f.i, "row indices, 1-based");
    s->add_option("--j", f.j, "column indices, 1-based");
    s->add_option("--alpha", f.alpha, "exponents");
    s->add_option("--method", f.method, "exact or mc");
    s->add_option("--samples", f.samples, "Monte Carlo samples");
    s->add_option("--seed", f.seed, "random seed");

    s = subs["trace"];
    s->add_option("--sphere", f.sphere, "sphere name");
    s->add_option("--n", f.n, "dimension");
    s->add_option("--i", f.i, "coordinate indices, 1-based");
    s->add_option("--alpha", f.alpha, "exponents");

    s = subs["rank"];
    s->add_option("--sphere", f.sphere, "sphere name or all");
    s->add_option("--n", f.n, "dimension");
    s->add_flag("--unconjugated", f.unconjugated, "products z_i z_j instead of z_i z_j*");

    s = subs["classify"];
    add_system(s, f);
    s->add_flag("--trace", f.trace, "print the certificate");

    s = subs["saturate"];
    add_system(s, f);
    s->add_option("--report", f.report, "degree of the reported relations");
    s->add_option("--goal", f.goals, "equation u=v to derive");
    s->add_option("--word", f.word, "word to look up");
    s->add_option("--sum", f.sum, "letter of --word to sum over");

    s = subs["reduce"];
    add_system(s, f);
    s->add_option("--expr", f.expr, "polynomial, e.g. (ab-ba)^2");
    s->add_option("--sum", f.sum, "letter summed over all indices");

    s = subs["check"];
    s->add_option("--kind", f.kind, "relations, fixed-vector, intertwiner, coaction, sign-table or group-sign");
    s->add_option("--sphere", f.sphere, "sphere name or all");
    s->add_option("--group", f.group, "group name");
    s->add_option("--model", f.model, "sphere, point, twisted, antidiagonal, pair, clifford, free or sqrt");
    s->add_option("--n", f.n, "dimension");
    s->add_option("--d", f.d, "matrix size of free models");
    s->add_option("--eps", f.eps, "off-diagonal size of the sqrt model");
    s->add_option("--partition", f.partition, "partition for fixed-vector and intertwiner checks");
    s->add_option("--relation", f.relation, "check one relation literal instead of the sphere");
    s->add_option("--regime", f.regime, "regime of the intertwiner map");
    s->add_option("--perm", f.perms, "permutation for group-sign")->delimiter(',');
    s->add_option("--i", f.i, "generator rows for group-sign");
    s->add_option("--j", f.j, "generator columns for group-sign");
    s->add_option("--samples", f.samples, "Haar samples");
    s->add_option("--roots", f.roots, "roots of unity for K_N");
    s->add_option("--seed", f.seed, "random seed");
    s->add_option("--tol", f.tol, "tolerance");

    s = subs["verify"];
    s->add_option("--suite", f.suite, "paper, quick or mc");
    s->add_option("--check", f.check, "run a single check");
    s->add_option("--seed", f.seed, "random seed");
    s->add_option("--samples", f.samples, "Monte Carlo samples");
    s->add_option("--tol", f.tol, "tolerance");
    s->add_flag("--timing", f.timing, "include timings");

    for (auto& [name, sub] : subs) add_common(sub, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto chosen = app.get_subcommands();
        err << (chosen.empty() ? app.help() : chosen.front()->help());
        return exit_usage;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        Output o;
        if (cmd == "partitions") o = cmd_partitions(f);
        else if (cmd == "signature") o = cmd_signature(f);
        else if (cmd == "gram") o = cmd_gram(f);
        else if (cmd == "weingarten") o = cmd_weingarten(f);
        else if (cmd == "moment") o = cmd_moment(f);
        else if (cmd == "trace") o = cmd_trace(f);
        else if (cmd == "rank") o = cmd_rank(f);
        else if (cmd == "classify") o = cmd_classify(f);
        else if (cmd == "saturate") o = cmd_saturate(f);
        else if (cmd == "reduce") o = cmd_reduce(f);
        else if (cmd == "check") o = cmd_check(f);
        else o = cmd_verify(f);

        std::string format = f.format.empty() ? (cmd == "verify" ? "table" : "json") : f.format;
        if (format == "table" && cmd != "verify") throw ParseError("--format table is only for verify");
        if (format == "json") {
            write_json(o.doc, out);
            out << '\n';
        } else if (format == "csv") {
            write_csv(o.table, out);
        } else {
            out << o.text;
        }
        if (o.code == exit_verification) err << cmd << ": verification failed\n";
        return o.code;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv = {"ncsphere"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ncs::cli
