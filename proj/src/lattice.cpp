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

#include "qldyn/lattice.hpp"

#include <algorithm>
#include <utility>

#include "qldyn/errors.hpp"

namespace qldyn {

namespace {

constexpr Index kDimCap = Index{1} << 30;

// stride[i] = product of local dims of the sites after i; the first site
// sits on the slowest index of the tensor product.
std::vector<Index> strides(const std::vector<Site>& sites) {
  std::vector<Index> out(sites.size());
  Index acc = 1;
  for (std::size_t i = sites.size(); i-- > 0;) {
    out[i] = acc;
    acc *= sites[i].local_dim;
  }
  return out;
}

// Target-space offset of every basis state of the subsystem spanned by
// `positions` (indices into target sites, canonical order).
std::vector<Index> subsystem_offsets(const std::vector<Site>& target_sites,
                                     const std::vector<Index>& target_strides,
                                     const std::vector<std::size_t>& positions) {
  Index dim = 1;
  for (std::size_t p : positions) dim *= target_sites[p].local_dim;
  std::vector<Index> offsets(static_cast<std::size_t>(dim), 0);
  Index block = dim;
  for (std::size_t p : positions) {
    const int d = target_sites[p].local_dim;
    block /= d;
    const Index stride = target_strides[p];
    // Mixed-radix counting: this position's digit advances every `block`
    // states and wraps every `block * d`.
    for (Index n = 0; n < dim; ++n) {
      offsets[static_cast<std::size_t>(n)] += ((n / block) % d) * stride;
    }
  }
  return offsets;
}

struct EmbedPlan {
  std::vector<Index> sub_offsets;
  std::vector<Index> rest_offsets;
};

EmbedPlan make_embed_plan(const LocalOperator& op, const Region& target) {
  const auto& target_sites = target.sites();
  const auto target_strides = strides(target_sites);

  std::vector<std::size_t> sub_positions;
  std::vector<bool> taken(target_sites.size(), false);
  for (const Site& s : op.support.sites()) {
    const auto pos = target.index_of(s);
    if (!pos) {
      throw InvalidArgument("embed: site " + to_string(s) +
                            " is not contained in the target region");
    }
    if (target_sites[*pos].local_dim != s.local_dim) {
      throw InvalidArgument("embed: local dimension mismatch at site " +
                            to_string(s));
    }
    sub_positions.push_back(*pos);
    taken[*pos] = true;
  }
  std::vector<std::size_t> rest_positions;
  for (std::size_t p = 0; p < target_sites.size(); ++p) {
    if (!taken[p]) rest_positions.push_back(p);
  }
  return {subsystem_offsets(target_sites, target_strides, sub_positions),
          subsystem_offsets(target_sites, target_strides, rest_positions)};
}

}  // namespace

Site site(int x) { return Site{{x}, 2}; }

Site site(int x, int y) { return Site{{x, y}, 2}; }

Site qudit(int x, int local_dim) { return Site{{x}, local_dim}; }

Site qudit(int x, int y, int local_dim) { return Site{{x, y}, local_dim}; }

std::string to_string(const Site& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.coords.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s.coords[i]);
  }
  return out + ")";
}

bool Region::contains(const Site& s) const {
  return std::binary_search(sites_.begin(), sites_.end(), s);
}

bool Region::contains(const Region& other) const {
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(),
                       other.sites_.end());
}

std::optional<std::size_t> Region::index_of(const Site& s) const {
  const auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || !(*it == s)) return std::nullopt;
  return static_cast<std::size_t>(it - sites_.begin());
}

Region make_region(std::vector<Site> sites) {
  if (sites.empty()) {
    throw InvalidArgument("make_region: the site list is empty");
  }
  for (const Site& s : sites) {
    if (s.coords.size() != 1 && s.coords.size() != 2) {
      throw InvalidArgument("make_region: sites must live in Z^1 or Z^2");
    }
    if (s.coords.size() != sites.front().coords.size()) {
      throw InvalidArgument("make_region: mixed lattice dimensions");
    }
    if (s.local_dim < 1) {
      throw InvalidArgument("make_region: local dimension must be positive");
    }
  }
  std::sort(sites.begin(), sites.end());
  for (std::size_t i = 1; i < sites.size(); ++i) {
    if (sites[i] == sites[i - 1]) {
      throw InvalidArgument("make_region: duplicate site " +
                            to_string(sites[i]));
    }
  }
  Index dim = 1;
  for (const Site& s : sites) {
    dim *= s.local_dim;
    if (dim > kDimCap) {
      throw CapacityError("make_region: region dimension exceeds 2^30");
    }
  }
  Region r;
  r.sites_ = std::move(sites);
  r.dim_ = dim;
  return r;
}

Region region_union(const Region& a, const Region& b) {
  std::vector<Site> sites;
  sites.reserve(a.size() + b.size());
  std::set_union(a.sites().begin(), a.sites().end(), b.sites().begin(),
                 b.sites().end(), std::back_inserter(sites));
  return make_region(std::move(sites));
}

LocalOperator::LocalOperator(Region support_in, Matrix matrix_in)
    : support(std::move(support_in)), matrix(std::move(matrix_in)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != support.dim()) {
    throw InvalidArgument("LocalOperator: matrix does not match region dimension");
  }
  if (!matrix.allFinite()) {
    throw InvalidArgument("LocalOperator: matrix has non-finite entries");
  }
}

LocalOperator site_operator(std::string_view label, const Site& s) {
  const int d = s.local_dim;
  Matrix m = Matrix::Zero(d, d);
  if (label == "I") {
    m.setIdentity();
  } else if (label == "X" || label == "Y" || label == "Z") {
    if (d != 2) {
      throw InvalidArgument("site_operator: Pauli labels need local_dim 2");
    }
    if (label == "X") {
      m << 0, 1, 1, 0;
    } else if (label == "Y") {
      m << 0, Complex(0, -1), Complex(0, 1), 0;
    } else {
      m << 1, 0, 0, -1;
    }
  } else if (label == "raise" || label == "lower") {
    if (d != 2) {
      throw InvalidArgument("site_operator: ladder labels need local_dim 2");
    }
    // lower = |0><1| annihilates the excited state |1> = (0,1)^T.
    if (label == "lower") {
      m(0, 1) = 1;
    } else {
      m(1, 0) = 1;
    }
  } else if (label.size() == 4 && label.substr(0, 2) == "E_" &&
             label[2] >= '0' && label[2] <= '9' && label[3] >= '0' &&
             label[3] <= '9') {
    const int i = label[2] - '0';
    const int j = label[3] - '0';
    if (i >= d || j >= d) {
      throw InvalidArgument("site_operator: matrix unit index out of range");
    }
    m(i, j) = 1;
  } else {
    throw InvalidArgument("site_operator: unknown label '" + std::string(label) +
                          "' (expected I, X, Y, Z, raise, lower, or E_ij)");
  }
  return LocalOperator(make_region({s}), std::move(m));
}

LocalOperator embed(const LocalOperator& op, const Region& target) {
  if (op.support == target) return op;
  const auto [sub, rest] = make_embed_plan(op, target);
  Matrix out = Matrix::Zero(target.dim(), target.dim());
  for (const Index rest_off : rest) {
    for (std::size_t c = 0; c < sub.size(); ++c) {
      const Index col = rest_off + sub[c];
      for (std::size_t r = 0; r < sub.size(); ++r) {
        out(rest_off + sub[r], col) =
            op.matrix(static_cast<Index>(r), static_cast<Index>(c));
      }
    }
  }
  return LocalOperator(target, std::move(out));
}

SparseMatrix embed_sparse(const LocalOperator& op, const Region& target) {
  const auto [sub, rest] = make_embed_plan(op, target);
  std::vector<Eigen::Triplet<Complex>> entries;
  std::vector<std::pair<std::pair<Index, Index>, Complex>> local;
  for (Index c = 0; c < op.matrix.cols(); ++c) {
    for (Index r = 0; r < op.matrix.rows(); ++r) {
      if (op.matrix(r, c) != Complex(0, 0)) {
        local.push_back({{r, c}, op.matrix(r, c)});
      }
    }
  }
  entries.reserve(rest.size() * local.size());
  for (const Index rest_off : rest) {
    for (const auto& [rc, value] : local) {
      entries.emplace_back(rest_off + sub[static_cast<std::size_t>(rc.first)],
                           rest_off + sub[static_cast<std::size_t>(rc.second)],
                           value);
    }
  }
  SparseMatrix out(target.dim(), target.dim());
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

double operator_norm(const Matrix& m) { return spectral_norm(m); }

double operator_norm(const LocalOperator& op) { return spectral_norm(op.matrix); }

LocalOperator commutator(const LocalOperator& a, const LocalOperator& b) {
  const Region u = region_union(a.support, b.support);
  const Matrix ma = embed(a, u).matrix;
  const Matrix mb = embed(b, u).matrix;
  return LocalOperator(u, ma * mb - mb * ma);
}

}  // namespace qldyn
