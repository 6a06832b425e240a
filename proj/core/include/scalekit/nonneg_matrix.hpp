#pragma once

#include <vector>

#include "scalekit/rational.hpp"

namespace scalekit {

// n x n non-negative matrix with exact rational entries and a float view.
// Scaling iterations run on the float view; the permanent and matching
// certificates use the exact entries.
class NonNegMatrix {
public:
    NonNegMatrix() = default;
    explicit NonNegMatrix(int n) : n_(n), entries_(static_cast<size_t>(n) * n, Rational(0)) {}
    NonNegMatrix(int n, std::vector<Rational> entries);

    static NonNegMatrix from_doubles(const std::vector<std::vector<double>>& rows);
    static NonNegMatrix identity(int n);

    int n() const { return n_; }

    const Rational& operator()(int i, int j) const { return entries_[static_cast<size_t>(i) * n_ + j]; }
    void set(int i, int j, Rational v);

    // row-major double view
    std::vector<double> double_view() const;

    // max bit length over entries
    int bit_complexity() const;

    bool has_zero_row() const;
    bool has_zero_col() const;

    // support as a 0/1 mask, row-major
    std::vector<bool> support() const;

private:
    int n_ = 0;
    std::vector<Rational> entries_;
};

}  // namespace scalekit
