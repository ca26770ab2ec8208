// Copyright 2026 The bornlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference computations used only by tests. Deliberately written with
// explicit index loops over the flattened tensor-product space so they share
// no code path with the library's matrix formulations.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "bornlab/linalg.hpp"

namespace oracle {

using bornlab::CMatrix;
using bornlab::Complex;
using bornlab::CVector;
using bornlab::Index;

/// |Psi> with index a * dB + b, from two factors.
inline CVector kron_vector(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
  return out;
}

/// rho_B(b, b') = sum_a Psi(a, b) conj(Psi(a, b')) on the flat vector.
inline CMatrix partial_trace_a(const CVector& flat, Index da, Index db) {
  CMatrix rho = CMatrix::Zero(db, db);
  for (Index b = 0; b < db; ++b)
    for (Index bp = 0; bp < db; ++bp) {
      Complex acc = 0.0;
      for (Index a = 0; a < da; ++a) acc += flat(a * db + b) * std::conj(flat(a * db + bp));
      rho(b, bp) = acc;
    }
  return rho;
}

/// Unnormalized B state after Alice's outcome M: tr_A[(M (x) I) |Psi><Psi|],
/// built from the full dA*dB density operator.
inline CMatrix conditional_b(const CVector& flat, Index da, Index db, const CMatrix& m) {
  const Index n = da * db;
  CMatrix full(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) full(i, j) = flat(i) * std::conj(flat(j));
  CMatrix out = CMatrix::Zero(db, db);
  for (Index b = 0; b < db; ++b)
    for (Index bp = 0; bp < db; ++bp) {
      Complex acc = 0.0;
      for (Index a = 0; a < da; ++a)
        for (Index ap = 0; ap < da; ++ap) acc += m(a, ap) * full(ap * db + b, a * db + bp);
      out(b, bp) = acc;
    }
  return out;
}

inline double overlap_squared(const CVector& a, const CVector& b) {
  Complex acc = 0.0;
  for (Index i = 0; i < a.size(); ++i) acc += std::conj(a(i)) * b(i);
  return std::norm(acc);
}

/// P(X > n) for X ~ Poisson(mean), summed directly.
inline double poisson_tail(double mean, int n) {
  double term = std::exp(-mean);
  double head = term;
  for (int k = 1; k <= n; ++k) {
    term *= mean / k;
    head += term;
  }
  return std::max(0.0, 1.0 - head);
}

}  // namespace oracle
