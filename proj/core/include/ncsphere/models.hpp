#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ncsphere/partition.hpp"
#include "ncsphere/spec.hpp"
#include "ncsphere/tensor.hpp"

namespace ncs {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct RelationSchema;

inline constexpr double default_tolerance = 1e-10;

struct PointModel {
    Field field = Field::real;
    CVector z;
};

// Coordinates as d x d matrices; a point is the case d = 1.
struct MatrixModel {
    Field field = Field::real;
    std::vector<CMatrix> z;

    int N() const { return static_cast<int>(z.size()); }
    int d() const { return z.empty() ? 0 : static_cast<int>(z.front().rows()); }
};

MatrixModel to_matrix_model(const PointModel& p);

// Normalized Gaussian vector.
PointModel sample_classical_point(Field f, int N, std::uint64_t seed);
// omega e_i with omega = +-1 (real) or +-1, +-i and one seeded phase (complex).
std::vector<PointModel> twisted_classical_points(Field f, int N, std::uint64_t seed = 0);

// X_i = [[0, z_i], [conj z_i, 0]], self-adjoint and half-commuting.
MatrixModel antidiagonal_model(const PointModel& z);
// Z_i = [[0, a_i], [b_i, 0]] for two points a, b; half-commuting with all
// conjugates.
MatrixModel pair_model(const PointModel& a, const PointModel& b);
// X_i (x) gamma_i with Jordan-Wigner gammas: turns commuting or
// half-commuting models into twisted ones.
MatrixModel clifford_twist(const MatrixModel& m);
// U_i / sqrt(N) with Haar unitaries (complex) or random symmetries (real).
MatrixModel free_model(Field f, int N, int d, std::uint64_t seed);
// A model for the sphere with generic (seeded) parameters.
MatrixModel sphere_model(const SphereSpec& s, int N, std::uint64_t seed);

struct SqrtModel {
    MatrixModel model;
    std::vector<CMatrix> Y;
    std::vector<double> commutator_norms;  // ||[Y_i, Y_j]|| for i < j
};

// X_i = sqrt(Y_i) with Y_i = [[r_i, z_i], [conj z_i, s_i]].
SqrtModel sqrt_positive_model(const std::vector<double>& r, const std::vector<double>& s,
                              const std::vector<cplx>& z);

struct Violation {
    std::string relation;
    IndexTuple indices;
    double residual = 0;
};

// Every instance of the schema on concrete indices, with its forced sign.
std::vector<Violation> check_schema(const MatrixModel& m, const RelationSchema& schema, bool twisted,
                                    double tol = default_tolerance);
std::vector<Violation> check_sphere_relations(const MatrixModel& m, const SphereSpec& s,
                                              double tol = default_tolerance);
std::vector<Violation> check_sphere_relations(const PointModel& p, const SphereSpec& s,
                                              double tol = default_tolerance);

// Monomial matrix: entry (i, perm[i]) equals phase[i].
struct SignedPermutation {
    Permutation perm;
    std::vector<cplx> phase;

    CMatrix matrix() const;
};

// H_N, all 2^N N! elements; N <= 4.
std::vector<SignedPermutation> enumerate_signed_permutations(int N);
// Monomial matrices with m-th roots of unity; N <= 4.
std::vector<SignedPermutation> enumerate_phase_permutations(int N, int m);

CMatrix dense(const SparseTensorMap& t);
CMatrix kron(const CMatrix& a, const CMatrix& b);

// T_p u^{(x)k} = u^{(x)l} T_p; black legs use the conjugate of u.
bool check_intertwiner(const Partition& p, const CMatrix& u, bool twisted, double tol = default_tolerance);

CMatrix haar_orthogonal(int N, std::mt19937_64& rng);
CMatrix haar_unitary(int N, std::mt19937_64& rng);

enum class HaarGroup { orthogonal, unitary, hyperoctahedral, K_N };
std::string to_string(HaarGroup g);
HaarGroup parse_haar_group(const std::string& name);

struct MCEstimate {
    cplx mean;
    double standard_error = 0;  // of the real part; 0 for exact enumeration
    long samples = 0;
    bool exact = false;
};

// Mean of u_{i1 j1}^{a1} ... u_{ik jk}^{ak}. The finite groups are
// integrated exactly (K_N with independent uniform phases).
MCEstimate haar_moment_mc(HaarGroup g, int N, const IndexTuple& i, const IndexTuple& j, const ColorWord& alpha,
                          long samples, std::uint64_t seed);

// || sum_j delta_p(j) z_{j1}^{a1} ... z_{jl}^{al} - 1 ||, colors of p giving a.
double check_fixed_vector_identity(const Partition& p, const MatrixModel& m, bool twisted);
double check_fixed_vector_identity(const Partition& p, const PointModel& m, bool twisted);

// z'_i = sum_j g_ij z_j.
MatrixModel transform(const CMatrix& g, const MatrixModel& m);

// The transformed coordinates satisfy the sphere relations again.
bool coaction_check(const CMatrix& g, const MatrixModel& m, const SphereSpec& s, double tol = default_tolerance);
bool coaction_check(const CMatrix& g, const PointModel& m, const SphereSpec& s, double tol = default_tolerance);

}  // namespace ncs
