#include "scalekit/tensor_tuple.hpp"

#include <cmath>

#include "scalekit/errors.hpp"

namespace scalekit {

TensorTuple::TensorTuple(std::vector<int> shape, int m) : shape_(std::move(shape)) {
    size_ = 1;
    for (int n : shape_) {
        if (n <= 0) throw Error("tensor shape must be positive");
        size_ *= n;
    }
    tensors_.assign(m, std::vector<Complex>(size_));
}

TensorTuple::TensorTuple(std::vector<int> shape, std::vector<std::vector<Complex>> tensors)
    : shape_(std::move(shape)), tensors_(std::move(tensors)) {
    size_ = 1;
    for (int n : shape_) {
        if (n <= 0) throw Error("tensor shape must be positive");
        size_ *= n;
    }
    for (const auto& t : tensors_)
        if (static_cast<long long>(t.size()) != size_) throw Error("tensor entry count does not match shape");
}

long long TensorTuple::offset(const std::vector<int>& idx) const {
    if (idx.size() != shape_.size()) throw Error("index order mismatch");
    long long off = 0;
    for (size_t ax = 0; ax < shape_.size(); ++ax) {
        if (idx[ax] < 0 || idx[ax] >= shape_[ax]) throw Error("index out of range");
        off = off * shape_[ax] + idx[ax];
    }
    return off;
}

double TensorTuple::norm() const {
    double s = 0.0;
    for (const auto& t : tensors_)
        for (const Complex& z : t) s += std::norm(z);
    return std::sqrt(s);
}

void TensorTuple::scale(double factor) {
    for (auto& t : tensors_)
        for (Complex& z : t) z *= factor;
}

std::vector<std::vector<int>> TensorTuple::support(double tol) const {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(shape_.size(), 0);
    for (long long off = 0; off < size_; ++off) {
        bool nonzero = false;
        for (const auto& t : tensors_)
            if (std::abs(t[off]) > tol) {
                nonzero = true;
                break;
            }
        if (nonzero) out.push_back(idx);
        // advance multi-index, last axis fastest
        for (int ax = static_cast<int>(shape_.size()) - 1; ax >= 0; --ax) {
            if (++idx[ax] < shape_[ax]) break;
            idx[ax] = 0;
        }
    }
    return out;
}

ComplexMatrix flatten(const TensorTuple& a, int axis) {
    const int d = a.order();
    if (axis < 1 || axis > d) throw Error("flatten: axis out of range");
    const int ax = axis - 1;
    const std::vector<int>& shape = a.shape();
    const int n_axis = shape[ax];
    const long long rest = a.tensor_size() / n_axis;
    ComplexMatrix b(n_axis, static_cast<int>(a.m() * rest));

    // strides of the row-major layout
    std::vector<long long> stride(d, 1);
    for (int k = d - 2; k >= 0; --k) stride[k] = stride[k + 1] * shape[k + 1];

    std::vector<int> idx(d, 0);
    for (int i = 0; i < a.m(); ++i) {
        std::fill(idx.begin(), idx.end(), 0);
        // column counter: lexicographic over remaining axes in their order
        for (long long col = 0; col < rest; ++col) {
            long long base = 0;
            for (int k = 0; k < d; ++k)
                if (k != ax) base += static_cast<long long>(idx[k]) * stride[k];
            for (int r = 0; r < n_axis; ++r)
                b(r, static_cast<int>(i * rest + col)) = a.tensor(i)[base + r * stride[ax]];
            for (int k = d - 1; k >= 0; --k) {
                if (k == ax) continue;
                if (++idx[k] < shape[k]) break;
                idx[k] = 0;
            }
        }
    }
    return b;
}

TensorTuple apply_axis(const TensorTuple& a, int axis, const ComplexMatrix& g) {
    const int d = a.order();
    if (axis < 1 || axis > d) throw Error("apply_axis: axis out of range");
    const int ax = axis - 1;
    const std::vector<int>& shape = a.shape();
    const int n_axis = shape[ax];
    if (g.rows() != n_axis || g.cols() != n_axis) throw Error("apply_axis: matrix shape mismatch");

    std::vector<long long> stride(d, 1);
    for (int k = d - 2; k >= 0; --k) stride[k] = stride[k + 1] * shape[k + 1];
    const long long rest = a.tensor_size() / n_axis;

    TensorTuple out(shape, a.m());
    std::vector<int> idx(d, 0);
    for (int i = 0; i < a.m(); ++i) {
        std::fill(idx.begin(), idx.end(), 0);
        for (long long c = 0; c < rest; ++c) {
            long long base = 0;
            for (int k = 0; k < d; ++k)
                if (k != ax) base += static_cast<long long>(idx[k]) * stride[k];
            for (int r = 0; r < n_axis; ++r) {
                Complex acc = 0.0;
                for (int s = 0; s < n_axis; ++s) acc += g(r, s) * a.tensor(i)[base + s * stride[ax]];
                out.tensor(i)[base + r * stride[ax]] = acc;
            }
            for (int k = d - 1; k >= 0; --k) {
                if (k == ax) continue;
                if (++idx[k] < shape[k]) break;
                idx[k] = 0;
            }
        }
    }
    return out;
}

TensorTuple apply_local(const TensorTuple& a, const std::vector<ComplexMatrix>& g) {
    if (static_cast<int>(g.size()) != a.order()) throw Error("apply_local: wrong number of factors");
    TensorTuple out = a;
    for (int ax = 1; ax <= a.order(); ++ax) out = apply_axis(out, ax, g[ax - 1]);
    return out;
}

}  // namespace scalekit
