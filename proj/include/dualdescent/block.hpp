#pragma once

#include <Eigen/Core>
#include <numeric>
#include <vector>

#include "dualdescent/errors.hpp"

namespace dualdescent {

// Block partition of the primal space: x = (x_1, ..., x_p) with x_i in R^{n_i},
// plus the constraint dimension m shared by all blocks.
class BlockStructure {
 public:
  BlockStructure() = default;
  BlockStructure(std::vector<int> dims, int m) : dims_(std::move(dims)), m_(m) {
    if (dims_.empty()) throw DimensionError("block structure needs p >= 1 blocks");
    if (m_ < 1) throw DimensionError("constraint dimension m must be >= 1");
    offsets_.resize(dims_.size());
    int off = 0;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (dims_[i] < 1) throw DimensionError("block dimension n_i must be >= 1");
      offsets_[i] = off;
      off += dims_[i];
    }
    n_ = off;
  }

  int p() const { return static_cast<int>(dims_.size()); }
  int n() const { return n_; }
  int m() const { return m_; }
  int dim(int i) const { return dims_.at(static_cast<std::size_t>(i)); }
  int offset(int i) const { return offsets_.at(static_cast<std::size_t>(i)); }
  const std::vector<int>& dims() const { return dims_; }

  bool operator==(const BlockStructure& o) const {
    return dims_ == o.dims_ && m_ == o.m_;
  }

  void check_vector(const Eigen::VectorXd& x) const {
    if (x.size() != n_)
      throw DimensionError("vector length " + std::to_string(x.size()) +
                           " does not match structure n=" + std::to_string(n_));
  }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int m_ = 0;
  int n_ = 0;
};

// A primal point addressable by block. Thin value type over a dense vector;
// block slicing covers [n] exactly once by construction of the offsets.
class BlockVector {
 public:
  BlockVector() = default;
  BlockVector(BlockStructure structure, Eigen::VectorXd data)
      : structure_(std::move(structure)), data_(std::move(data)) {
    structure_.check_vector(data_);
  }
  explicit BlockVector(BlockStructure structure)
      : structure_(std::move(structure)), data_(Eigen::VectorXd::Zero(structure_.n())) {}

  const BlockStructure& structure() const { return structure_; }
  const Eigen::VectorXd& data() const { return data_; }
  Eigen::VectorXd& data() { return data_; }

  auto block(int i) { return data_.segment(structure_.offset(i), structure_.dim(i)); }
  auto block(int i) const { return data_.segment(structure_.offset(i), structure_.dim(i)); }

 private:
  BlockStructure structure_;
  Eigen::VectorXd data_;
};

}  // namespace dualdescent
