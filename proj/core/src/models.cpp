#include "ncsphere/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ncsphere/error.hpp"
#include "ncsphere/relations.hpp"
#include "ncsphere/tensor.hpp"

namespace ncs {

namespace {

constexpr double pi = 3.14159265358979323846;

CMatrix gaussian_matrix(int n, bool complex, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = complex ? cplx(g(rng), g(rng)) : cplx(g(rng), 0);
    return m;
}

// Q from a Gaussian QR, with the phases of diag(R) moved into Q so the law is
// Haar.
CMatrix haar_group(int n, bool complex, std::mt19937_64& rng) {
    Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(n, complex, rng));
    CMatrix q = qr.householderQ();
    const CMatrix& r = qr.matrixQR();
    for (int c = 0; c < n; ++c) {
        const cplx d = r(c, c);
        const double a = std::abs(d);
        if (a > 0) q.col(c) *= d / a;
    }
    return q;
}

CMatrix pauli(char which) {
    CMatrix m = CMatrix::Zero(2, 2);
    switch (which) {
        case 'x': m(0, 1) = m(1, 0) = 1; break;
        case 'y': m(0, 1) = cplx(0, -1); m(1, 0) = cplx(0, 1); break;
        case 'z': m(0, 0) = 1; m(1, 1) = -1; break;
        default: m(0, 0) = m(1, 1) = 1;
    }
    return m;
}

// N pairwise anticommuting self-adjoint unitaries on ceil(N/2) qubits.
std::vector<CMatrix> jordan_wigner(int N) {
    const int qubits = std::max(1, (N + 1) / 2);
    std::vector<CMatrix> gammas;
    for (int i = 0; i < N; ++i) {
        const int site = i / 2;
        CMatrix g = CMatrix::Identity(1, 1);
        for (int q = 0; q < qubits; ++q) {
            const char c = q < site ? 'z' : q == site ? (i % 2 ? 'y' : 'x') : 'i';
            g = kron(g, pauli(c));
        }
        gammas.push_back(g);
    }
    return gammas;
}

CMatrix adjoint_if(const CMatrix& m, bool star) { return star ? CMatrix(m.adjoint()) : m; }

CMatrix word_value(const MatrixModel& m, const IndexTuple& idx, const std::vector<bool>& star) {
    CMatrix out = CMatrix::Identity(m.d(), m.d());
    for (std::size_t p = 0; p < idx.size(); ++p) out = out * adjoint_if(m.z[idx[p]], star[p]);
    return out;
}

std::string coordinate_word(const IndexTuple& idx, const std::vector<bool>& star) {
    std::string s;
    for (std::size_t p = 0; p < idx.size(); ++p) {
        s += "z" + std::to_string(idx[p] + 1);
        if (star[p]) s += "*";
    }
    return s;
}

// Calls f for every tuple in [0,N)^k, or only the injective ones.
template <class F>
void for_each_tuple(int N, int k, bool injective, F&& f) {
    IndexTuple t(k, 0);
    while (true) {
        bool ok = true;
        if (injective)
            for (int a = 0; a < k && ok; ++a)
                for (int b = a + 1; b < k && ok; ++b) ok = t[a] != t[b];
        if (ok) f(static_cast<const IndexTuple&>(t));
        int i = k - 1;
        while (i >= 0 && ++t[i] == N) t[i--] = 0;
        if (i < 0) break;
    }
}

void check_model_shape(const MatrixModel& m) {
    if (m.z.empty()) throw SizeError("model without coordinates");
    for (const auto& x : m.z)
        if (x.rows() != m.d() || x.cols() != m.d()) throw FrameError("model coordinates are not square of one size");
}

}  // namespace

MatrixModel to_matrix_model(const PointModel& p) {
    MatrixModel m;
    m.field = p.field;
    for (int i = 0; i < p.z.size(); ++i) m.z.push_back(CMatrix::Constant(1, 1, p.z(i)));
    return m;
}

PointModel sample_classical_point(Field f, int N, std::uint64_t seed) {
    if (N < 1) throw DomainError("N must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    PointModel p;
    p.field = f;
    p.z.resize(N);
    for (int i = 0; i < N; ++i) p.z(i) = f == Field::real ? cplx(g(rng), 0) : cplx(g(rng), g(rng));
    p.z /= p.z.norm();
    return p;
}

std::vector<PointModel> twisted_classical_points(Field f, int N, std::uint64_t seed) {
    if (N < 1) throw DomainError("N must be positive");
    std::vector<cplx> phases = {1.0, -1.0};
    if (f == Field::complex) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> theta(0, 2 * pi);
        phases.push_back(cplx(0, 1));
        phases.push_back(cplx(0, -1));
        phases.push_back(std::polar(1.0, theta(rng)));
    }
    std::vector<PointModel> out;
    for (int i = 0; i < N; ++i)
        for (const cplx& w : phases) {
            PointModel p;
            p.field = f;
            p.z = CVector::Zero(N);
            p.z(i) = w;
            out.push_back(p);
        }
    return out;
}

MatrixModel antidiagonal_model(const PointModel& z) {
    MatrixModel m;
    m.field = Field::real;
    for (int i = 0; i < z.z.size(); ++i) {
        CMatrix x = CMatrix::Zero(2, 2);
        x(0, 1) = z.z(i);
        x(1, 0) = std::conj(z.z(i));
        m.z.push_back(x);
    }
    return m;
}

MatrixModel pair_model(const PointModel& a, const PointModel& b) {
    if (a.z.size() != b.z.size()) throw FrameError("pair model needs points of one dimension");
    MatrixModel m;
    m.field = Field::complex;
    for (int i = 0; i < a.z.size(); ++i) {
        CMatrix x = CMatrix::Zero(2, 2);
        x(0, 1) = a.z(i);
        x(1, 0) = b.z(i);
        m.z.push_back(x);
    }
    return m;
}

MatrixModel clifford_twist(const MatrixModel& m) {
    check_model_shape(m);
    const auto gammas = jordan_wigner(m.N());
    MatrixModel out;
    out.field = m.field;
    for (int i = 0; i < m.N(); ++i) out.z.push_back(kron(m.z[i], gammas[i]));
    return out;
}

MatrixModel free_model(Field f, int N, int d, std::uint64_t seed) {
    if (N < 1 || d < 1) throw DomainError("N and d must be positive");
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin;
    MatrixModel m;
    m.field = f;
    const double scale = 1 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < N; ++i) {
        if (f == Field::complex) {
            m.z.push_back(haar_group(d, true, rng) * scale);
            continue;
        }
        const CMatrix o = haar_group(d, false, rng);
        CMatrix sgn = CMatrix::Identity(d, d);
        for (int r = 0; r < d; ++r)
            if (coin(rng)) sgn(r, r) = -1;
        m.z.push_back(o * sgn * o.adjoint() * scale);
    }
    return m;
}

MatrixModel sphere_model(const SphereSpec& s, int N, std::uint64_t seed) {
    if (s.level == Level::free) return free_model(s.field, N, 4, seed);
    MatrixModel m;
    if (s.level == Level::classical) {
        m = to_matrix_model(sample_classical_point(s.field, N, seed));
    } else if (s.field == Field::real) {
        m = antidiagonal_model(sample_classical_point(Field::complex, N, seed));
    } else {
        m = pair_model(sample_classical_point(Field::complex, N, seed),
                       sample_classical_point(Field::complex, N, seed ^ 0x9e3779b97f4a7c15ULL));
    }
    return s.twisted ? clifford_twist(m) : m;
}

SqrtModel sqrt_positive_model(const std::vector<double>& r, const std::vector<double>& s,
                              const std::vector<cplx>& z) {
    const std::size_t N = r.size();
    if (N == 0 || s.size() != N || z.size() != N) throw FrameError("r, s and z need one common length");
    const double tol = 1e-12;
    const double sr = std::accumulate(r.begin(), r.end(), 0.0);
    const double ss = std::accumulate(s.begin(), s.end(), 0.0);
    const cplx sz = std::accumulate(z.begin(), z.end(), cplx(0));
    if (std::abs(sr - 1) > tol || std::abs(ss - 1) > tol || std::abs(sz) > tol)
        throw DomainError("need sum r = sum s = 1 and sum z = 0");

    SqrtModel out;
    out.model.field = Field::real;
    for (std::size_t i = 0; i < N; ++i) {
        CMatrix y(2, 2);
        y << r[i], z[i], std::conj(z[i]), s[i];
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(y);
        const auto& ev = eig.eigenvalues();
        if (ev.minCoeff() <= 0)
            throw DomainError("Y_" + std::to_string(i + 1) + " is not positive definite");
        const CMatrix& v = eig.eigenvectors();
        out.model.z.push_back(v * ev.cwiseSqrt().cast<cplx>().asDiagonal() * v.adjoint());
        out.Y.push_back(y);
    }
    double largest = 0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            const double c = (out.Y[i] * out.Y[j] - out.Y[j] * out.Y[i]).norm();
            out.commutator_norms.push_back(c);
            largest = std::max(largest, c);
        }
    if (largest < tol) throw DomainError("the Y_i commute; the model is degenerate");
    return out;
}

std::vector<Violation> check_schema(const MatrixModel& m, const RelationSchema& schema, bool twisted, double tol) {
    check_model_shape(m);
    std::vector<Violation> out;
    const int N = m.N();
    const bool complex = m.field == Field::complex && !schema.exps.empty();
    auto report = [&](std::string rel, IndexTuple idx, double res) {
        if (!(res < tol)) out.push_back({std::move(rel), std::move(idx), res});
    };
    const int k = static_cast<int>(schema.kernel.size());
    const int vars = *std::max_element(schema.kernel.begin(), schema.kernel.end()) + 1;
    // Unrestricted schemas hold with arbitrary exponents at every position;
    // restricted ones with the schema's exponents flipped per variable.
    const int patterns = complex ? 1 << (schema.restricted ? vars : k) : 1;
    for_each_tuple(N, schema.restricted ? vars : k, schema.restricted, [&](const IndexTuple& t) {
        IndexTuple idx(k);
        for (int p = 0; p < k; ++p) idx[p] = schema.restricted ? t[schema.kernel[p]] : t[p];
        if (!schema.restricted && t != idx) return;
        const int sign = relation_sign(schema.sigma, idx, twisted);
        for (int pat = 0; pat < patterns; ++pat) {
            std::vector<bool> star(k, false);
            for (int p = 0; p < k; ++p) {
                if (!complex) continue;
                if (schema.restricted)
                    star[p] = (schema.exps[p] == LegColor::black) != bool(pat >> schema.kernel[p] & 1);
                else
                    star[p] = pat >> p & 1;
            }
            IndexTuple ridx(k);
            std::vector<bool> rstar(k);
            for (int p = 0; p < k; ++p) {
                ridx[p] = idx[schema.sigma[p]];
                rstar[p] = star[schema.sigma[p]];
            }
            const double res =
                (word_value(m, idx, star) - static_cast<double>(sign) * word_value(m, ridx, rstar)).norm();
            report(coordinate_word(idx, star) + "=" + (sign < 0 ? "-" : "+") + coordinate_word(ridx, rstar),
                   idx, res);
        }
    });
    return out;
}

std::vector<Violation> check_sphere_relations(const MatrixModel& m, const SphereSpec& s, double tol) {
    check_model_shape(m);
    std::vector<Violation> out;
    const int N = m.N(), d = m.d();
    const CMatrix one = CMatrix::Identity(d, d);
    auto report = [&](std::string rel, IndexTuple idx, double res) {
        if (!(res < tol)) out.push_back({std::move(rel), std::move(idx), res});
    };

    if (s.field == Field::real)
        for (int i = 0; i < N; ++i) {
            const std::string zi = "z" + std::to_string(i + 1);
            report(zi + "=" + zi + "*", {i}, (m.z[i] - m.z[i].adjoint()).norm());
        }
    CMatrix left = CMatrix::Zero(d, d), right = CMatrix::Zero(d, d);
    for (const auto& x : m.z) {
        left += x * x.adjoint();
        right += x.adjoint() * x;
    }
    report("sum z_i z_i*=1", {}, (left - one).norm());
    report("sum z_i* z_i=1", {}, (right - one).norm());

    for (const auto& schema : sphere_relations(s).schemas) {
        auto v = check_schema(m, schema, s.twisted, tol);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

std::vector<Violation> check_sphere_relations(const PointModel& p, const SphereSpec& s, double tol) {
    return check_sphere_relations(to_matrix_model(p), s, tol);
}

CMatrix SignedPermutation::matrix() const {
    const int n = static_cast<int>(perm.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, perm[i]) = phase[i];
    return m;
}

std::vector<SignedPermutation> enumerate_phase_permutations(int N, int m) {
    if (N < 1 || N > 4) throw SizeError("monomial matrices are enumerated for 1 <= N <= 4");
    if (m < 1) throw DomainError("need at least one phase");
    long long phase_count = 1;
    for (int i = 0; i < N; ++i) phase_count *= m;
    std::vector<SignedPermutation> out;
    for (const auto& perm : all_permutations(N))
        for (long long code = 0; code < phase_count; ++code) {
            SignedPermutation g{perm, {}};
            long long c = code;
            for (int i = 0; i < N; ++i, c /= m) {
                const long long e = c % m;
                // Exact values for the real signs.
                g.phase.push_back(m == 2 ? cplx(e ? -1 : 1, 0) : std::polar(1.0, 2 * pi * e / m));
            }
            out.push_back(std::move(g));
        }
    return out;
}

std::vector<SignedPermutation> enumerate_signed_permutations(int N) { return enumerate_phase_permutations(N, 2); }

CMatrix dense(const SparseTensorMap& t) {
    long long rows = 1, cols = 1;
    for (int i = 0; i < t.output_arity(); ++i) rows *= t.N();
    for (int i = 0; i < t.input_arity(); ++i) cols *= t.N();
    CMatrix m = CMatrix::Zero(rows, cols);
    for (const auto& [key, c] : t.entries()) {
        m(static_cast<long>(key / cols), static_cast<long>(key % cols)) = static_cast<double>(c);
    }
    return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

bool check_intertwiner(const Partition& p, const CMatrix& u, bool twisted, double tol) {
    if (u.rows() != u.cols()) throw FrameError("u must be square");
    const int N = static_cast<int>(u.rows());
    const CMatrix T = dense(t_map(p, N, twisted));
    auto power = [&](int first, int count) {
        CMatrix out = CMatrix::Identity(1, 1);
        for (int leg = first; leg < first + count; ++leg)
            out = kron(out, p.color(leg) == LegColor::black ? CMatrix(u.conjugate()) : u);
        return out;
    };
    const CMatrix in = power(0, p.upper()), out = power(p.upper(), p.lower());
    return (T * in - out * T).norm() < tol;
}

CMatrix haar_orthogonal(int N, std::mt19937_64& rng) { return haar_group(N, false, rng); }
CMatrix haar_unitary(int N, std::mt19937_64& rng) { return haar_group(N, true, rng); }

std::string to_string(HaarGroup g) {
    switch (g) {
        case HaarGroup::orthogonal: return "orthogonal";
        case HaarGroup::unitary: return "unitary";
        case HaarGroup::hyperoctahedral: return "hyperoctahedral";
        case HaarGroup::K_N: return "K_N";
    }
    return "?";
}

HaarGroup parse_haar_group(const std::string& name) {
    for (HaarGroup g : {HaarGroup::orthogonal, HaarGroup::unitary, HaarGroup::hyperoctahedral, HaarGroup::K_N})
        if (name == to_string(g)) return g;
    if (name == "o_n") return HaarGroup::orthogonal;
    if (name == "u_n") return HaarGroup::unitary;
    if (name == "h_n") return HaarGroup::hyperoctahedral;
    if (name == "k_n") return HaarGroup::K_N;
    throw ParseError("unknown group: " + name);
}

MCEstimate haar_moment_mc(HaarGroup g, int N, const IndexTuple& i, const IndexTuple& j, const ColorWord& alpha,
                          long samples, std::uint64_t seed) {
    const std::size_t k = i.size();
    if (j.size() != k || (!alpha.empty() && alpha.size() != k)) throw FrameError("i, j and alpha differ in length");
    for (std::size_t p = 0; p < k; ++p)
        if (i[p] < 0 || i[p] >= N || j[p] < 0 || j[p] >= N) throw DomainError("index out of range");
    auto black = [&](std::size_t p) { return !alpha.empty() && alpha[p] == LegColor::black; };
    auto value = [&](const CMatrix& u) {
        cplx v = 1;
        for (std::size_t p = 0; p < k; ++p) v *= black(p) ? std::conj(u(i[p], j[p])) : u(i[p], j[p]);
        return v;
    };

    MCEstimate est;
    if (g == HaarGroup::hyperoctahedral) {
        const auto elems = enumerate_signed_permutations(N);
        for (const auto& e : elems) est.mean += value(e.matrix());
        est.mean /= static_cast<double>(elems.size());
        est.samples = static_cast<long>(elems.size());
        est.exact = true;
        return est;
    }
    if (g == HaarGroup::K_N) {
        // A row's phase integrates to 1 iff its net exponent vanishes.
        const auto perms = all_permutations(N);
        long hits = 0;
        for (const auto& sigma : perms) {
            std::vector<int> net(N, 0);
            bool nonzero = true;
            for (std::size_t p = 0; p < k && nonzero; ++p) {
                nonzero = sigma[i[p]] == j[p];
                net[i[p]] += black(p) ? -1 : 1;
            }
            if (nonzero && std::all_of(net.begin(), net.end(), [](int e) { return e == 0; })) ++hits;
        }
        est.mean = static_cast<double>(hits) / static_cast<double>(perms.size());
        est.samples = static_cast<long>(perms.size());
        est.exact = true;
        return est;
    }
    if (samples < 2) throw DomainError("need at least two samples");
    std::mt19937_64 rng(seed);
    double sum_sq = 0;
    for (long s = 0; s < samples; ++s) {
        const cplx v = value(haar_group(N, g == HaarGroup::unitary, rng));
        est.mean += v;
        sum_sq += v.real() * v.real();
    }
    const double n = static_cast<double>(samples);
    est.mean /= n;
    const double var = (sum_sq - n * est.mean.real() * est.mean.real()) / (n - 1);
    est.standard_error = std::sqrt(std::max(var, 0.0) / n);
    est.samples = samples;
    return est;
}

double check_fixed_vector_identity(const Partition& p, const MatrixModel& m, bool twisted) {
    if (p.upper() != 0) throw FrameError("fixed vectors have lower legs only");
    check_model_shape(m);
    const int l = p.lower();
    std::vector<bool> star(l, false);
    if (m.field == Field::complex) {
        if (!p.colored()) throw FrameError("complex models need a colored partition");
        for (int q = 0; q < l; ++q) star[q] = p.color(q) == LegColor::black;
    }
    CMatrix sum = CMatrix::Zero(m.d(), m.d());
    for_each_block_constant(p, m.N(), [&](const IndexTuple& t) {
        const int sign = delta(p, t, twisted);
        if (sign != 0) sum += static_cast<double>(sign) * word_value(m, t, star);
    });
    return (sum - CMatrix::Identity(m.d(), m.d())).norm();
}

double check_fixed_vector_identity(const Partition& p, const PointModel& m, bool twisted) {
    return check_fixed_vector_identity(p, to_matrix_model(m), twisted);
}

MatrixModel transform(const CMatrix& g, const MatrixModel& m) {
    check_model_shape(m);
    if (g.rows() != m.N() || g.cols() != m.N()) throw FrameError("g must be N x N");
    MatrixModel out;
    out.field = m.field;
    for (int r = 0; r < m.N(); ++r) {
        CMatrix x = CMatrix::Zero(m.d(), m.d());
        for (int c = 0; c < m.N(); ++c) x += g(r, c) * m.z[c];
        out.z.push_back(x);
    }
    return out;
}

bool coaction_check(const CMatrix& g, const MatrixModel& m, const SphereSpec& s, double tol) {
    return check_sphere_relations(transform(g, m), s, tol).empty();
}

bool coaction_check(const CMatrix& g, const PointModel& m, const SphereSpec& s, double tol) {
    return coaction_check(g, to_matrix_model(m), s, tol);
}

}  // namespace ncs
