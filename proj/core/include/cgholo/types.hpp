#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cgholo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Dense rank-3 array with equal extents, t(i,j,k), i,j,k in [0,n).
class Tensor3 {
public:
  Tensor3() : n_(0) {}
  explicit Tensor3(int n) : n_(n), d_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return d_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  double operator()(int i, int j, int k) const { return d_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }

private:
  int n_;
  std::vector<double> d_;
};

/// Dense rank-4 array with equal extents.
class Tensor4 {
public:
  Tensor4() : n_(0) {}
  explicit Tensor4(int n) : n_(n), d_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int i, int j, int k, int l) {
    return d_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return d_[((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l];
  }

private:
  int n_;
  std::vector<double> d_;
};

}  // namespace cgholo
