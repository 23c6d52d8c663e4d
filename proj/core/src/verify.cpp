#include "ncsphere/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "ncsphere/error.hpp"
#include "ncsphere/models.hpp"
#include "ncsphere/relations.hpp"
#include "ncsphere/tensor.hpp"
#include "ncsphere/weingarten.hpp"

namespace ncs {

namespace {

mpq_class frac(long a, long b) {
    mpq_class r(a, b);
    r.canonicalize();
    return r;
}

long long ipow(long long b, int e) {
    long long r = 1;
    while (e--) r *= b;
    return r;
}

ExactMatrix filled(int n, const mpq_class& diag, const mpq_class& off) {
    ExactMatrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = r == c ? diag : off;
    return m;
}

std::vector<ColorWord> colorings(int l) {
    std::vector<ColorWord> out;
    for (int code = 0; code < 1 << l; ++code) {
        ColorWord w;
        for (int p = 0; p < l; ++p) w.push_back(code >> p & 1 ? LegColor::black : LegColor::white);
        out.push_back(w);
    }
    return out;
}

std::vector<ColorWord> words_for(const Spec& g, int k) {
    return g.field == Field::real ? std::vector<ColorWord>{real_word(k)} : colorings(k);
}

// Collects failures; the check passes when none were recorded.
struct Tally {
    long checked = 0;
    long failed = 0;
    std::string first;

    void expect(bool ok, const std::string& what) {
        ++checked;
        if (ok) return;
        if (failed++ == 0) first = what;
    }
    std::string summary(const std::string& extra = "") const {
        std::ostringstream s;
        s << checked << " checks";
        if (!extra.empty()) s << ", " << extra;
        if (failed) s << "; " << failed << " failed, first: " << first;
        return s.str();
    }
};

CheckResult weingarten_closed_forms(const VerifyOptions&) {
    Tally t;
    const Spec o_n(Field::real, Level::classical), u_n(Field::complex, Level::classical);
    for (int N = 3; N <= 7; ++N) {
        const auto W = weingarten_matrix(o_n, real_word(4), N);
        t.expect(W == filled(3, N + 1, -1) * frac(1, N * (N - 1) * (N + 2)), "real N=" + std::to_string(N));
        const auto Wc = weingarten_matrix(u_n, parse_colors("11**"), N);
        t.expect(Wc == filled(2, N, -1) * frac(1, N * (N * N - 1)), "complex N=" + std::to_string(N));
    }
    return {0, "", t.failed == 0, 0, t.summary("N=3..7"), {}};
}

CheckResult scalar_products(const VerifyOptions&) {
    Tally t;
    for (int m = 1; m <= 3; ++m) {
        const auto ps = enumerate(PartitionClass::P_even, 0, 2 * m);
        for (int N = 1; N <= 4; ++N)
            for (bool twisted : {false, true}) {
                std::vector<FixedVector> xs;
                for (const auto& p : ps) xs.push_back(xi_vector(p, N, twisted));
                for (std::size_t a = 0; a < ps.size(); ++a)
                    for (std::size_t b = 0; b < ps.size(); ++b)
                        t.expect(inner_product(xs[a], xs[b]) == ipow(N, join(ps[a], ps[b]).block_count),
                                 ps[a].to_string() + " " + ps[b].to_string() + " N=" + std::to_string(N));
            }
    }
    return {0, "", t.failed == 0, 0, t.summary("m<=3, N<=4"), {}};
}

CheckResult functoriality(const VerifyOptions&) {
    Tally t;
    std::vector<std::vector<std::vector<Partition>>> by_rows(4, std::vector<std::vector<Partition>>(4));
    for (int k = 0; k <= 3; ++k)
        for (int l = 0; l <= 3; ++l) by_rows[k][l] = enumerate(PartitionClass::P_even, k, l);
    for (int N = 1; N <= 3; ++N)
        for (bool twisted : {false, true}) {
            auto T = [&](const Partition& p) { return t_map(p, N, twisted); };
            for (int k = 0; k <= 3; ++k)
                for (int l = 0; l <= 3; ++l)
                    for (const auto& p : by_rows[k][l]) {
                        const auto tp = T(p);
                        t.expect(T(involution(p)) == tp.transpose(), "involution " + p.to_string());
                        for (int k2 = 0; k + k2 <= 3; ++k2)
                            for (int l2 = 0; l + l2 <= 3; ++l2)
                                for (const auto& q : by_rows[k2][l2])
                                    t.expect(T(tensor_concat(p, q)) == kronecker(tp, T(q)),
                                             "tensor " + p.to_string() + " " + q.to_string());
                        for (int m = 0; m <= 3; ++m)
                            for (const auto& q : by_rows[l][m]) {
                                const auto r = compose(p, q);
                                t.expect(multiply(T(q), tp) == T(r.partition).scaled(ipow(N, r.loops)),
                                         "compose " + p.to_string() + " " + q.to_string());
                            }
                    }
        }
    return {0, "", t.failed == 0, 0, t.summary("rows<=3, N<=3"), {}};
}

CheckResult explicit_maps(const VerifyOptions&) {
    Tally t;
    const auto cross = Partition::parse("ab|ba");
    const auto reversal = Partition::parse("abc|cba");
    for (int N = 1; N <= 4; ++N) {
        const auto tc = t_map(cross, N, true);
        t.expect(tc.size() == static_cast<std::size_t>(N * N), "crossing size");
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) t.expect(tc.at({j, i}, {i, j}) == (i == j ? 1 : -1), "crossing entry");
        const auto tr = t_map(reversal, N, true);
        t.expect(tr.size() == static_cast<std::size_t>(N * N * N), "reversal size");
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k) {
                    const bool distinct = i != j && j != k && i != k;
                    t.expect(tr.at({k, j, i}, {i, j, k}) == (distinct ? -1 : 1), "reversal entry");
                }
    }
    for (int n = 0; n <= 8; n += 2)
        for (int k = 0; k <= n; ++k)
            for (const auto& p : enumerate(PartitionClass::NC2, k, n - k))
                for (int N = 1; N <= (n <= 6 ? 4 : 2); ++N)
                    t.expect(t_map(p, N, true) == t_map(p, N, false), "noncrossing " + p.to_string());
    return {0, "", t.failed == 0, 0, t.summary("N<=4"), {}};
}

CheckResult classification(const VerifyOptions& opt) {
    Tally t;
    const std::vector<Regime> regimes = {{Field::real, false}, {Field::real, true}, {Field::complex, false},
                                         {Field::complex, true}};
    for (const auto& r : regimes)
        for (int k = 3; k <= 4; ++k) {
            if (k == 4 && opt.reduced_classification && (r.field != Field::real || r.twisted)) continue;
            for (const auto& sigma : all_permutations(k)) {
                Level expected = Level::classical;
                if (sigma == identity_permutation(k))
                    expected = Level::free;
                else if (halfcommuting_membership(sigma))
                    expected = Level::half;
                const auto c = classify_monomial_sphere({sigma}, r);
                t.expect(c.sphere && *c.sphere == Spec(r.field, expected, r.twisted),
                         regime_name(r) + " " + permutation_to_string(sigma));
            }
        }
    return {0, "", t.failed == 0, 0, t.summary(opt.reduced_classification ? "S_4 in the real regime" : "S_3, S_4"),
            {}};
}

CheckResult derivations(const VerifyOptions&) {
    Tally t;
    const auto cyc = Permutation{2, 0, 1};
    const auto a = reduce(parse_combination("(ab-ba)^2"), monomial_system({cyc}, Regime{Field::real, false}));
    t.expect(a.result.is_zero() && !a.trace.steps.empty(), "(ab-ba)^2 = " + to_string(a.result));
    const auto b = reduce(parse_combination("(ab+ba)^2"), monomial_system({cyc}, Regime{Field::real, true}));
    t.expect(b.result.is_zero() && !b.trace.steps.empty(), "(ab+ba)^2 = " + to_string(b.result));
    return {0, "", t.failed == 0, 0,
            t.summary(std::to_string(a.trace.steps.size()) + " and " + std::to_string(b.trace.steps.size()) +
                      " trace steps"),
            {}};
}

CheckResult halfcommuting_groups(const VerifyOptions&) {
    Tally t;
    const std::size_t expected[] = {2, 4, 12, 36};
    const auto sys = sphere_relations(Spec(Field::real, Level::half));
    std::string sizes;
    for (int k = 3; k <= 6; ++k) {
        const auto g = relation_group(sys, k);
        std::size_t members = 0;
        for (const auto& sigma : all_permutations(k)) members += halfcommuting_membership(sigma);
        t.expect(g.closed && g.elements.size() == expected[k - 3] && members == expected[k - 3],
                 "k=" + std::to_string(k));
        sizes += (sizes.empty() ? "" : ",") + std::to_string(g.elements.size());
    }
    return {0, "", t.failed == 0, 0, t.summary("orders " + sizes), {}};
}

CheckResult ranks(const VerifyOptions&) {
    Tally t;
    for (const Spec& s : all_specs())
        for (int N = 2; N <= 3; ++N) {
            const bool small = s.field == Field::real && s.level == Level::classical;
            t.expect(gram_rank_products(s, N) == (small ? N * (N + 1) / 2 : N * N),
                     sphere_name(s) + " N=" + std::to_string(N));
        }
    return {0, "", t.failed == 0, 0, t.summary("N=2,3"), {}};
}

CheckResult stochasticity(const VerifyOptions&) {
    Tally t;
    const Spec half(Field::real, Level::half);
    for (int N = 3; N <= 6; ++N) {
        const mpq_class m = N * (N + 1) * (N + 2);
        for (const auto& s : row_sum_profile(gram(half, real_word(6), N))) t.expect(s == m, "Gram N=" + std::to_string(N));
        for (const auto& s : row_sum_profile(weingarten_matrix(half, real_word(6), N)))
            t.expect(s == 1 / m, "Weingarten N=" + std::to_string(N));
    }
    return {0, "", t.failed == 0, 0, t.summary("N=3..6"), {}};
}

CheckResult sign_table(const VerifyOptions&) {
    Tally t;
    const Spec groups[] = {Spec(Field::real, Level::half, true), Spec(Field::complex, Level::half, true)};
    const SignTable table = span_sign_table();
    for (const Spec& g : groups) {
        t.expect(comult_sign_check(g, table), group_name(g));
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                SignTable bad = table;
                bad[r][c] = -bad[r][c];
                t.expect(!comult_sign_check(g, bad), group_name(g) + " perturbed at " + std::to_string(r + 1) + "," +
                                                         std::to_string(c + 1));
            }
    }
    return {0, "", t.failed == 0, 0, t.summary(), {}};
}

CheckResult intertwiners(const VerifyOptions& opt) {
    Tally t;
    const auto cross = Partition::parse("ab|ba");
    const auto reversal = Partition::parse("abc|cba");
    for (int N = 1; N <= 3; ++N)
        for (const auto& g : enumerate_signed_permutations(N)) {
            t.expect(check_intertwiner(cross, g.matrix(), true, opt.tol), "signed permutation, crossing");
            t.expect(check_intertwiner(reversal, g.matrix(), true, opt.tol), "signed permutation, reversal");
        }
    std::mt19937_64 rng(opt.seed);
    const double loose = 1e-8;
    for (int s = 0; s < opt.haar_samples; ++s) {
        const CMatrix u = haar_orthogonal(3, rng);
        t.expect(check_intertwiner(cross, u, false, loose), "Haar sample, untwisted crossing");
        t.expect(!check_intertwiner(cross, u, true, loose), "Haar sample, twisted crossing");
    }
    return {0, "", t.failed == 0, 0, t.summary(std::to_string(opt.haar_samples) + " Haar samples"), {}};
}

CheckResult monte_carlo(const VerifyOptions& opt) {
    CheckResult r;
    bool ok = true;
    const Spec o_n(Field::real, Level::classical);
    for (int N : {3, 4}) {
        const IndexTuple ones(4, 0);
        const mpq_class exact = moment(o_n, N, ones, ones, real_word(4));
        ok = ok && exact == frac(3, N * (N + 2));
        const auto e = haar_moment_mc(HaarGroup::orthogonal, N, ones, ones, {}, opt.mc_samples, opt.seed + N);
        const double x = exact.get_d();
        ok = ok && std::abs(e.mean.real() - x) < opt.mc_sigmas * e.standard_error;
        r.estimates.push_back({"u11^4 N=" + std::to_string(N), x, e.mean.real(), e.standard_error, e.samples});
    }
    r.passed = ok;
    std::ostringstream s;
    for (const auto& e : r.estimates)
        s << (s.tellp() ? "; " : "") << e.label << ": " << e.mean << " +- " << e.standard_error << " vs " << e.exact;
    r.detail = s.str();
    return r;
}

CheckResult fixed_vectors(const VerifyOptions& opt) {
    Tally t;
    const int N = 3;
    double worst = 0;
    for (const Spec& s : all_specs()) {
        std::vector<MatrixModel> models;
        for (int seed = 0; seed < opt.fixed_vector_models; ++seed)
            models.push_back(sphere_model(s, N, opt.seed + 1000 + static_cast<std::uint64_t>(seed)));
        if (s.twisted && s.level == Level::classical)
            for (const auto& p : twisted_classical_points(s.field, N, opt.seed)) models.push_back(to_matrix_model(p));
        for (int l = 2; l <= 6; l += 2)
            for (const auto& alpha : words_for(s, l))
                for (const auto& p : category_pairings(s, alpha))
                    for (const auto& m : models) {
                        const double res = check_fixed_vector_identity(p, m, s.twisted);
                        worst = std::max(worst, res);
                        t.expect(res < opt.tol, sphere_name(s) + " " + p.to_string());
                    }
    }
    std::ostringstream extra;
    extra << "max residual " << worst;
    return {0, "", t.failed == 0, 0, t.summary(extra.str()), {}};
}

CheckResult ergodicity(const VerifyOptions&) {
    Tally t;
    long singular = 0;
    for (const Spec& g : all_specs())
        for (int k = 1; k <= 6; ++k)
            for (const auto& alpha : words_for(g, k))
                for (int N = 1; N <= 4; ++N) {
                    if (category_pairings(g, alpha).empty()) continue;
                    std::optional<WeingartenTable> table;
                    try {
                        table.emplace(g, alpha, N);
                    } catch (const SingularError&) {
                        ++singular;
                        continue;
                    }
                    const auto& W = table->weingarten();
                    const int n = W.rows();
                    std::vector<mpq_class> rows(n), cols(n);
                    for (int a = 0; a < n; ++a)
                        for (int b = 0; b < n; ++b) {
                            rows[a] += W(a, b);
                            cols[b] += W(a, b);
                        }
                    IndexTuple i(k, 0);
                    while (true) {
                        const auto d = table->deltas(i);
                        mpq_class left = 0, right = 0;
                        for (int a = 0; a < n; ++a) {
                            if (d[a] == 0) continue;
                            left += d[a] * rows[a];
                            right += d[a] * cols[a];
                        }
                        t.expect(left == right, group_name(g) + " " + colors_to_string(alpha) + " N=" + std::to_string(N));
                        int p = k - 1;
                        while (p >= 0 && ++i[p] == N) i[p--] = 0;
                        if (p < 0) break;
                    }
                }
    return {0, "", t.failed == 0, 0, t.summary(std::to_string(singular) + " singular frames skipped"), {}};
}

using CheckFn = CheckResult (*)(const VerifyOptions&);

struct CheckEntry {
    const char* name;
    CheckFn fn;
};

const CheckEntry checks[check_count] = {
    {"Weingarten closed forms", weingarten_closed_forms},
    {"scalar products of fixed vectors", scalar_products},
    {"functoriality of the maps", functoriality},
    {"explicit twisted maps", explicit_maps},
    {"classification of monomial spheres", classification},
    {"derivations", derivations},
    {"half-commuting permutation groups", halfcommuting_groups},
    {"ranks of degree-two products", ranks},
    {"stochastic Gram matrices", stochasticity},
    {"span sign table", sign_table},
    {"intertwiners", intertwiners},
    {"Monte Carlo moments", monte_carlo},
    {"fixed-vector identity", fixed_vectors},
    {"ergodicity identity", ergodicity},
};

}  // namespace

Suite parse_suite(const std::string& name) {
    for (Suite s : {Suite::paper, Suite::quick, Suite::mc})
        if (name == to_string(s)) return s;
    throw ParseError("unknown suite: " + name);
}

std::string to_string(Suite s) {
    switch (s) {
        case Suite::paper: return "paper";
        case Suite::quick: return "quick";
        case Suite::mc: return "mc";
    }
    return "?";
}

bool SuiteReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string check_name(int id) {
    if (id < 1 || id > check_count) throw DomainError("no check " + std::to_string(id));
    return checks[id - 1].name;
}

CheckResult run_check(int id, const VerifyOptions& opt) {
    const std::string name = check_name(id);
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = checks[id - 1].fn(opt);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.id = id;
    r.name = name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

VerifyOptions suite_options(Suite s, VerifyOptions base) {
    if (s == Suite::quick) {
        base.reduced_classification = true;
        base.fixed_vector_models = std::min(base.fixed_vector_models, 20);
    }
    return base;
}

SuiteReport run_suite(Suite s, const VerifyOptions& opt) {
    const VerifyOptions o = suite_options(s, opt);
    SuiteReport report;
    report.suite = s;
    for (int id = 1; id <= check_count; ++id) {
        if (s == Suite::quick && id == 12) continue;
        if (s == Suite::mc && id != 11 && id != 12) continue;
        report.checks.push_back(run_check(id, o));
    }
    return report;
}

}  // namespace ncs
