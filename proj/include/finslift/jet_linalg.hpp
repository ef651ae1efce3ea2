#pragma once

// Small dense linear algebra on jet-valued matrices.

#include <vector>

#include "finslift/jets.hpp"
#include "finslift/tensor.hpp"

namespace finslift {

using JetTensor = Tensor<Jet>;

JetTensor zeros(std::vector<int> shape, int nvars, int order);

// Constant term of every entry.
Array values(const JetTensor& t);

// Matrix product of two rank-2 jet tensors.
JetTensor matmul(const JetTensor& a, const JetTensor& b);
JetTensor transpose(const JetTensor& a);

// Inverse of a square jet matrix by a Neumann series around the inverse of
// its constant part. Throws DegenerateMetric when |det| of the constant part
// falls below `det_floor`.
JetTensor inverse(const JetTensor& a, double det_floor = 1e-12);

// Derivative of every entry in one jet variable.
JetTensor derivative(const JetTensor& t, int var);

// Every entry truncated to `order`.
JetTensor truncated(const JetTensor& t, int order);

}  // namespace finslift
