#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace ncs {

// Dense matrix of arbitrary-precision rationals, row-major.
class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(int rows, int cols);
    static ExactMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    mpq_class& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const mpq_class& operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    ExactMatrix operator*(const ExactMatrix& other) const;
    ExactMatrix operator*(const mpq_class& s) const;
    bool operator==(const ExactMatrix& other) const;
    bool is_symmetric() const;
    ExactMatrix transpose() const;

    std::vector<std::vector<std::string>> to_strings() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<mpq_class> data_;
};

// Fraction-free elimination over the integers after clearing denominators.
int rank(const ExactMatrix& m);
mpq_class determinant(const ExactMatrix& m);
// Throws DomainError when m is singular.
ExactMatrix inverse(const ExactMatrix& m);

std::vector<mpq_class> row_sum_profile(const ExactMatrix& m);

}  // namespace ncs
