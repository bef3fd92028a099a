// Copyright 2026 The qldyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLDYN_LATTICE_HPP
#define QLDYN_LATTICE_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qldyn/linalg.hpp"

namespace qldyn {

// One lattice point of Z^d (d = 1 or 2) carrying a finite local dimension.
struct Site {
  std::vector<int> coords;
  int local_dim = 2;

  friend bool operator==(const Site& a, const Site& b) {
    return a.coords == b.coords;
  }
  friend std::strong_ordering operator<=>(const Site& a, const Site& b) {
    return a.coords <=> b.coords;
  }
};

Site site(int x);
Site site(int x, int y);
Site qudit(int x, int local_dim);
Site qudit(int x, int y, int local_dim);
std::string to_string(const Site& s);

// A finite set of sites in canonical (lexicographic) order. The Hilbert
// space of a region is the tensor product of the site spaces in that order,
// with the first site on the slowest index, matching kron().
class Region {
 public:
  Region() = default;

  const std::vector<Site>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  Index dim() const { return dim_; }
  bool contains(const Site& s) const;
  bool contains(const Region& other) const;
  std::optional<std::size_t> index_of(const Site& s) const;

  friend bool operator==(const Region& a, const Region& b) {
    return a.sites_ == b.sites_;
  }

 private:
  friend Region make_region(std::vector<Site> sites);
  std::vector<Site> sites_;
  Index dim_ = 1;
};

// Sorts into canonical order, rejects duplicates and mixed-dimension
// coordinates, and computes the total dimension (capped at 2^30).
Region make_region(std::vector<Site> sites);
Region region_union(const Region& a, const Region& b);

// An element of the local algebra: a matrix on the region's Hilbert space.
struct LocalOperator {
  LocalOperator() = default;
  LocalOperator(Region support_in, Matrix matrix_in);

  Region support;
  Matrix matrix;
};

// Single-site generators by label: I, X, Y, Z, raise, lower, and matrix
// units E_ij (single decimal digits, i,j < local_dim).
LocalOperator site_operator(std::string_view label, const Site& s);

// Isometric *-embedding A -> A (x) 1 into a larger region; exact (entries
// are copied, never arithmetically combined).
LocalOperator embed(const LocalOperator& op, const Region& target);
SparseMatrix embed_sparse(const LocalOperator& op, const Region& target);

double operator_norm(const Matrix& m);
double operator_norm(const LocalOperator& op);

// [a, b] on the union of the supports.
LocalOperator commutator(const LocalOperator& a, const LocalOperator& b);

}  // namespace qldyn

#endif
