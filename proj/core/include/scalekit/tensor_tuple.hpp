#pragma once

#include <vector>

#include "scalekit/complex_matrix.hpp"

namespace scalekit {

// Tuple (A_1, ..., A_m) of order-d tensors, each of shape (n_1, ..., n_d).
// Entries are stored row-major per tensor: axis 1 is the slowest index.
class TensorTuple {
public:
    TensorTuple() = default;
    TensorTuple(std::vector<int> shape, int m);
    TensorTuple(std::vector<int> shape, std::vector<std::vector<Complex>> tensors);

    int m() const { return static_cast<int>(tensors_.size()); }
    int order() const { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const { return shape_; }
    long long tensor_size() const { return size_; }

    const std::vector<Complex>& tensor(int i) const { return tensors_[i]; }
    std::vector<Complex>& tensor(int i) { return tensors_[i]; }

    // multi-index (0-based per axis) to flat offset
    long long offset(const std::vector<int>& idx) const;
    Complex at(int i, const std::vector<int>& idx) const { return tensors_[i][offset(idx)]; }
    void set(int i, const std::vector<int>& idx, Complex v) { tensors_[i][offset(idx)] = v; }

    // sqrt(sum of |entry|^2) over the whole tuple
    double norm() const;
    void scale(double factor);

    // support over all tuple members: list of multi-indices (0-based)
    std::vector<std::vector<int>> support(double tol = 0.0) const;

private:
    std::vector<int> shape_;
    long long size_ = 0;
    std::vector<std::vector<Complex>> tensors_;
};

// Axis flattening B_axis of shape n_axis x (m * prod_{j != axis} n_j).
// Columns run lexicographically over (tuple index, remaining axes in order).
// axis is 1-based to match the usual "i-th coordinate" phrasing.
ComplexMatrix flatten(const TensorTuple& a, int axis);

// Apply g to one coordinate: entries contracted over axis with matrix g.
TensorTuple apply_axis(const TensorTuple& a, int axis, const ComplexMatrix& g);

// Apply a full local scaling (g_1, ..., g_d).
TensorTuple apply_local(const TensorTuple& a, const std::vector<ComplexMatrix>& g);

}  // namespace scalekit
