#include "ncsphere/exact_matrix.hpp"

#include <utility>

#include "ncsphere/error.hpp"

namespace ncs {

namespace {

using IntMatrix = std::vector<std::vector<mpz_class>>;

// Each row scaled by the lcm of its denominators.
IntMatrix clear_denominators(const ExactMatrix& m) {
    IntMatrix a(m.rows(), std::vector<mpz_class>(m.cols()));
    for (int r = 0; r < m.rows(); ++r) {
        mpz_class l = 1;
        for (int c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
        for (int c = 0; c < m.cols(); ++c) a[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
    }
    return a;
}

// Bareiss forward elimination in place; returns pivot columns and the sign
// of the row permutation. Entries below pivots become zero and each pivot row
// is divisible by the previous pivot.
std::vector<int> bareiss(IntMatrix& a, int cols, int& swaps) {
    const int rows = static_cast<int>(a.size());
    std::vector<int> pivots;
    mpz_class prev = 1;
    int r = 0;
    swaps = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        if (p != r) {
            std::swap(a[p], a[r]);
            ++swaps;
        }
        for (int i = r + 1; i < rows; ++i) {
            for (int j = c + 1; j < static_cast<int>(a[i].size()); ++j) {
                a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

ExactMatrix::ExactMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

ExactMatrix ExactMatrix::identity(int n) {
    ExactMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

ExactMatrix ExactMatrix::operator*(const ExactMatrix& other) const {
    if (cols_ != other.rows_) throw FrameError("matrix product shape mismatch");
    ExactMatrix r(rows_, other.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const mpq_class& a = (*this)(i, k);
            if (a == 0) continue;
            for (int j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
        }
    return r;
}

ExactMatrix ExactMatrix::operator*(const mpq_class& s) const {
    ExactMatrix r = *this;
    for (auto& x : r.data_) x *= s;
    return r;
}

bool ExactMatrix::operator==(const ExactMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
}

bool ExactMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

std::vector<std::vector<std::string>> ExactMatrix::to_strings() const {
    std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).get_str();
    return out;
}

int rank(const ExactMatrix& m) {
    auto a = clear_denominators(m);
    int swaps = 0;
    return static_cast<int>(bareiss(a, m.cols(), swaps).size());
}

mpq_class determinant(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw FrameError("determinant of a non-square matrix");
    if (m.rows() == 0) return 1;
    auto a = clear_denominators(m);
    mpq_class scale = 1;
    for (int r = 0; r < m.rows(); ++r) {
        mpz_class l = 1;
        for (int c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
        scale /= l;
    }
    int swaps = 0;
    const auto pivots = bareiss(a, m.cols(), swaps);
    if (static_cast<int>(pivots.size()) < m.rows()) return 0;
    mpq_class det = a[m.rows() - 1][m.cols() - 1];
    det *= scale;
    return swaps % 2 ? mpq_class(-det) : det;
}

ExactMatrix inverse(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw FrameError("inverse of a non-square matrix");
    const int n = m.rows();
    // Row-scaled system D*M; (D*M)^{-1} * D = M^{-1}.
    std::vector<mpz_class> scale(n, 1);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            mpz_lcm(scale[r].get_mpz_t(), scale[r].get_mpz_t(), m(r, c).get_den_mpz_t());
    IntMatrix a(n, std::vector<mpz_class>(2 * n));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a[r][c] = m(r, c).get_num() * (scale[r] / m(r, c).get_den());
        a[r][n + r] = scale[r];
    }
    int swaps = 0;
    const auto pivots = bareiss(a, n, swaps);
    if (static_cast<int>(pivots.size()) < n) throw DomainError("matrix is singular");
    // Back substitution on the upper-triangular integer system.
    ExactMatrix x(n, n);
    for (int col = 0; col < n; ++col) {
        for (int i = n - 1; i >= 0; --i) {
            mpq_class s = a[i][n + col];
            for (int j = i + 1; j < n; ++j) s -= a[i][j] * x(j, col);
            x(i, col) = s / a[i][i];
        }
    }
    return x;
}

std::vector<mpq_class> row_sum_profile(const ExactMatrix& m) {
    std::vector<mpq_class> out(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out[i] += m(i, j);
    return out;
}

}  // namespace ncs
