// Copyright 2026 The shallowlab Authors
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

#include "shallowlab/tableau.hpp"

#include <algorithm>
#include <bit>

namespace shallowlab {

CliffordGate CliffordGate::inverse() const {
  if (kind == GateKind::S) return s_dag(a);
  if (kind == GateKind::S_DAG) return s(a);
  return *this;
}

std::string CliffordGate::str() const {
  switch (kind) {
    case GateKind::H: return "H " + std::to_string(a);
    case GateKind::S: return "S " + std::to_string(a);
    case GateKind::S_DAG: return "S_DAG " + std::to_string(a);
    case GateKind::X: return "X " + std::to_string(a);
    case GateKind::Y: return "Y " + std::to_string(a);
    case GateKind::Z: return "Z " + std::to_string(a);
    case GateKind::CZ: return "CZ " + std::to_string(a) + " " + std::to_string(b);
    case GateKind::CNOT: return "CNOT " + std::to_string(a) + " " + std::to_string(b);
  }
  return "?";
}

Circuit inverse(const Circuit& c) {
  Circuit out;
  out.reserve(c.size());
  for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back(it->inverse());
  return out;
}

void conjugate_in_place(const CliffordGate& g, PauliString& p) {
  auto need = [&](size_t q) {
    if (q >= p.size()) throw std::out_of_range("gate index out of range");
  };
  need(g.a);
  if (g.two_qubit()) {
    need(g.b);
    if (g.a == g.b) throw std::invalid_argument("two-qubit gate on a single qubit");
  }
  size_t a = g.a, b = g.b;
  bool xa = p.x(a), za = p.z(a);
  switch (g.kind) {
    case GateKind::H:
      if (xa && za) p.negate();
      p.set_x(a, za);
      p.set_z(a, xa);
      break;
    case GateKind::S:
      if (xa) {
        p.set_phase(p.phase() + 1);
        p.set_z(a, !za);
      }
      break;
    case GateKind::S_DAG:
      if (xa) {
        p.set_phase(p.phase() + 3);
        p.set_z(a, !za);
      }
      break;
    case GateKind::X:
      if (za) p.negate();
      break;
    case GateKind::Z:
      if (xa) p.negate();
      break;
    case GateKind::Y:
      if (xa != za) p.negate();
      break;
    case GateKind::CNOT:
      if (xa) p.set_x(b, !p.x(b));
      if (p.z(b)) p.set_z(a, !za);
      break;
    case GateKind::CZ: {
      bool xb = p.x(b);
      if (xa && xb) p.negate();
      if (xb) p.set_z(a, !za);
      if (xa) p.set_z(b, !p.z(b));
      break;
    }
  }
}

void conjugate_by_rotation(const PauliString& axis, PauliString& p) {
  if (axis.commutes(p)) return;
  PauliString q = axis;
  q *= p;
  q.set_phase(q.phase() + 3);
  p = q;
}

PauliString conjugate_pauli_through(const Circuit& c, PauliString p) {
  for (const auto& g : c) conjugate_in_place(g, p);
  return p;
}

Tableau::Tableau(size_t n) : n_(n), w_(words_for(n)), bits_(2 * n * 2 * words_for(n), 0), phases_(2 * n, 0) {
  for (size_t q = 0; q < n; ++q) {
    xrow(q)[q >> 6] |= uint64_t{1} << (q & 63);
    zrow(n + q)[q >> 6] |= uint64_t{1} << (q & 63);
  }
}

Tableau Tableau::plus_state(size_t n) {
  Tableau t(n);
  for (size_t q = 0; q < n; ++q) t.h(q);
  return t;
}

Tableau Tableau::from_rows(const std::vector<PauliString>& destabilizers, const std::vector<PauliString>& stabilizers) {
  size_t n = stabilizers.size();
  if (destabilizers.size() != n) throw std::invalid_argument("row count mismatch");
  Tableau t(n);
  for (size_t i = 0; i < n; ++i) {
    if (destabilizers[i].size() != n || stabilizers[i].size() != n) throw std::invalid_argument("row size mismatch");
    t.set_row(i, destabilizers[i]);
    t.set_row(n + i, stabilizers[i]);
  }
  return t;
}

void Tableau::check_qubit(size_t q) const {
  if (q >= n_) throw std::out_of_range("qubit index out of range");
}

void Tableau::h(size_t q) {
  check_qubit(q);
  size_t w = q >> 6;
  uint64_t m = uint64_t{1} << (q & 63);
  for (size_t r = 0; r < 2 * n_; ++r) {
    uint64_t& xw = xrow(r)[w];
    uint64_t& zw = zrow(r)[w];
    bool xb = xw & m, zb = zw & m;
    if (xb && zb) phases_[r] ^= 2;
    if (xb != zb) {
      xw ^= m;
      zw ^= m;
    }
  }
}

void Tableau::s(size_t q) {
  check_qubit(q);
  size_t w = q >> 6;
  uint64_t m = uint64_t{1} << (q & 63);
  for (size_t r = 0; r < 2 * n_; ++r) {
    if (xrow(r)[w] & m) {
      phases_[r] = (phases_[r] + 1) & 3;
      zrow(r)[w] ^= m;
    }
  }
}

void Tableau::s_dag(size_t q) {
  check_qubit(q);
  size_t w = q >> 6;
  uint64_t m = uint64_t{1} << (q & 63);
  for (size_t r = 0; r < 2 * n_; ++r) {
    if (xrow(r)[w] & m) {
      phases_[r] = (phases_[r] + 3) & 3;
      zrow(r)[w] ^= m;
    }
  }
}

void Tableau::x(size_t q) {
  check_qubit(q);
  size_t w = q >> 6;
  uint64_t m = uint64_t{1} << (q & 63);
  for (size_t r = 0; r < 2 * n_; ++r)
    if (zrow(r)[w] & m) phases_[r] ^= 2;
}

void Tableau::z(size_t q) {
  check_qubit(q);
  size_t w = q >> 6;
  uint64_t m = uint64_t{1} << (q & 63);
  for (size_t r = 0; r < 2 * n_; ++r)
    if (xrow(r)[w] & m) phases_[r] ^= 2;
}

void Tableau::y(size_t q) {
  check_qubit(q);
  size_t w = q >> 6;
  uint64_t m = uint64_t{1} << (q & 63);
  for (size_t r = 0; r < 2 * n_; ++r)
    if (bool(xrow(r)[w] & m) != bool(zrow(r)[w] & m)) phases_[r] ^= 2;
}

void Tableau::cnot(size_t c, size_t t) {
  check_qubit(c);
  check_qubit(t);
  if (c == t) throw std::invalid_argument("CNOT control equals target");
  size_t wc = c >> 6, wt = t >> 6;
  uint64_t mc = uint64_t{1} << (c & 63), mt = uint64_t{1} << (t & 63);
  for (size_t r = 0; r < 2 * n_; ++r) {
    uint64_t* xr = xrow(r);
    uint64_t* zr = zrow(r);
    if (xr[wc] & mc) xr[wt] ^= mt;
    if (zr[wt] & mt) zr[wc] ^= mc;
  }
}

void Tableau::cz(size_t a, size_t b) {
  check_qubit(a);
  check_qubit(b);
  if (a == b) throw std::invalid_argument("CZ on a single qubit");
  size_t wa = a >> 6, wb = b >> 6;
  uint64_t ma = uint64_t{1} << (a & 63), mb = uint64_t{1} << (b & 63);
  for (size_t r = 0; r < 2 * n_; ++r) {
    uint64_t* xr = xrow(r);
    uint64_t* zr = zrow(r);
    bool xa = xr[wa] & ma, xb = xr[wb] & mb;
    if (xa && xb) phases_[r] ^= 2;
    if (xb) zr[wa] ^= ma;
    if (xa) zr[wb] ^= mb;
  }
}

void Tableau::swap(size_t a, size_t b) {
  cnot(a, b);
  cnot(b, a);
  cnot(a, b);
}

void Tableau::apply(const CliffordGate& g) {
  switch (g.kind) {
    case GateKind::H: h(g.a); break;
    case GateKind::S: s(g.a); break;
    case GateKind::S_DAG: s_dag(g.a); break;
    case GateKind::X: x(g.a); break;
    case GateKind::Y: y(g.a); break;
    case GateKind::Z: z(g.a); break;
    case GateKind::CZ: cz(g.a, g.b); break;
    case GateKind::CNOT: cnot(g.a, g.b); break;
  }
}

void Tableau::apply(const Circuit& c) {
  for (const auto& g : c) apply(g);
}

PauliString Tableau::row(size_t r) const {
  PauliString p(n_);
  std::copy(xrow(r), xrow(r) + w_, p.xs().begin());
  std::copy(zrow(r), zrow(r) + w_, p.zs().begin());
  p.set_phase(phases_[r]);
  return p;
}

void Tableau::set_row(size_t r, const PauliString& p) {
  std::copy(p.xs().begin(), p.xs().end(), xrow(r));
  std::copy(p.zs().begin(), p.zs().end(), zrow(r));
  phases_[r] = p.phase();
}

void Tableau::row_mul(size_t target, size_t source) {
  uint64_t* xt = xrow(target);
  uint64_t* zt = zrow(target);
  const uint64_t* xs = xrow(source);
  const uint64_t* zs = zrow(source);
  unsigned cross = 0;
  for (size_t w = 0; w < w_; ++w) {
    cross += std::popcount(zt[w] & xs[w]);
    xt[w] ^= xs[w];
    zt[w] ^= zs[w];
  }
  phases_[target] = uint8_t((phases_[target] + phases_[source] + 2 * cross) & 3);
}

bool Tableau::row_anticommutes(size_t r, const PauliString& p) const {
  const uint64_t* xr = xrow(r);
  const uint64_t* zr = zrow(r);
  uint64_t acc = 0;
  for (size_t w = 0; w < w_; ++w) acc ^= (xr[w] & p.zs()[w]) ^ (zr[w] & p.xs()[w]);
  return std::popcount(acc) & 1;
}

void Tableau::rotate_pi4(const PauliString& p) {
  if (p.size() != n_) throw std::invalid_argument("Pauli size mismatch");
  if (!p.is_hermitian()) throw std::invalid_argument("rotation axis must be Hermitian");
  for (size_t r = 0; r < 2 * n_; ++r) {
    if (!row_anticommutes(r, p)) continue;
    PauliString q = p;
    q *= row(r);
    q.set_phase(q.phase() + 3);
    set_row(r, q);
  }
}

void Tableau::apply_pauli(const PauliString& p) {
  if (p.size() != n_) throw std::invalid_argument("Pauli size mismatch");
  for (size_t r = 0; r < 2 * n_; ++r)
    if (row_anticommutes(r, p)) phases_[r] ^= 2;
}

void Tableau::permute(const std::vector<size_t>& perm) {
  if (perm.size() != n_) throw std::invalid_argument("permutation size mismatch");
  std::vector<uint64_t> fresh(bits_.size(), 0);
  for (size_t r = 0; r < 2 * n_; ++r) {
    const uint64_t* xr = xrow(r);
    const uint64_t* zr = zrow(r);
    uint64_t* nx = fresh.data() + r * 2 * w_;
    uint64_t* nz = nx + w_;
    for (size_t q = 0; q < n_; ++q) {
      size_t d = perm[q];
      if ((xr[q >> 6] >> (q & 63)) & 1) nx[d >> 6] |= uint64_t{1} << (d & 63);
      if ((zr[q >> 6] >> (q & 63)) & 1) nz[d >> 6] |= uint64_t{1} << (d & 63);
    }
  }
  bits_.swap(fresh);
}

std::optional<int> Tableau::peek(const PauliString& p) const {
  if (p.size() != n_) throw std::invalid_argument("Pauli size mismatch");
  for (size_t i = 0; i < n_; ++i)
    if (row_anticommutes(n_ + i, p)) return std::nullopt;
  PauliString acc(n_);
  for (size_t i = 0; i < n_; ++i)
    if (row_anticommutes(i, p)) acc *= row(n_ + i);
  if (!acc.same_up_to_phase(p)) throw std::logic_error("tableau invariant violated in peek");
  unsigned diff = (p.phase() + 4 - acc.phase()) & 3;
  if (diff & 1) throw std::invalid_argument("measured Pauli is not Hermitian");
  return diff == 0 ? 1 : -1;
}

Measurement Tableau::measure(const PauliString& p, Rng& rng, std::optional<int> forced) {
  if (p.size() != n_) throw std::invalid_argument("Pauli size mismatch");
  if (p.is_identity_up_to_phase()) throw std::invalid_argument("cannot measure the identity");
  if (!p.is_hermitian()) throw std::invalid_argument("measured Pauli is not Hermitian");
  if (forced && *forced != 1 && *forced != -1) throw std::invalid_argument("forced sign must be +1 or -1");
  size_t pivot = 2 * n_;
  for (size_t i = 0; i < n_; ++i) {
    if (row_anticommutes(n_ + i, p)) {
      pivot = n_ + i;
      break;
    }
  }
  if (pivot == 2 * n_) {
    int sign = *peek(p);
    if (forced && *forced != sign)
      throw ContradictionError("forced outcome contradicts a deterministic measurement of " + p.str());
    return {sign, true};
  }
  for (size_t r = 0; r < 2 * n_; ++r)
    if (r != pivot && row_anticommutes(r, p)) row_mul(r, pivot);
  std::copy(xrow(pivot), xrow(pivot) + 2 * w_, xrow(pivot - n_));
  phases_[pivot - n_] = phases_[pivot];
  int sign = forced ? *forced : (random_bit(rng) ? -1 : 1);
  PauliString q = p;
  if (sign < 0) q.negate();
  set_row(pivot, q);
  return {sign, false};
}

Measurement Tableau::measure_z(size_t q, Rng& rng, std::optional<int> forced) {
  check_qubit(q);
  return measure(PauliString::single(n_, q, 'Z'), rng, forced);
}

PauliString Tableau::stabilizer(size_t i) const { return row(n_ + i); }
PauliString Tableau::destabilizer(size_t i) const { return row(i); }

std::vector<PauliString> Tableau::stabilizers() const {
  std::vector<PauliString> out;
  for (size_t i = 0; i < n_; ++i) out.push_back(row(n_ + i));
  return out;
}

std::vector<PauliString> Tableau::canonical_stabilizers() const {
  std::vector<PauliString> rows = stabilizers();
  size_t top = 0;
  auto bit = [](const PauliString& p, size_t col, size_t n) { return col < n ? p.x(col) : p.z(col - n); };
  for (size_t col = 0; col < 2 * n_ && top < rows.size(); ++col) {
    size_t piv = top;
    while (piv < rows.size() && !bit(rows[piv], col, n_)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[top], rows[piv]);
    for (size_t r = 0; r < rows.size(); ++r)
      if (r != top && bit(rows[r], col, n_)) rows[r] *= rows[top];
    ++top;
  }
  return rows;
}

bool Tableau::same_state(const Tableau& other) const {
  return n_ == other.n_ && canonical_stabilizers() == other.canonical_stabilizers();
}

bool Tableau::check_invariants() const {
  for (size_t i = 0; i < 2 * n_; ++i) {
    PauliString a = row(i);
    if (!a.is_hermitian()) return false;
    for (size_t j = i + 1; j < 2 * n_; ++j) {
      bool anti = !a.commutes(row(j));
      bool expect = (j == i + n_);
      if (anti != expect) return false;
    }
  }
  for (const auto& p : canonical_stabilizers())
    if (p.is_identity_up_to_phase()) return false;
  return true;
}

Snapshot Tableau::snapshot() const { return Snapshot{bits_, phases_, n_}; }

void Tableau::restore(const Snapshot& s) {
  n_ = s.n;
  w_ = words_for(s.n);
  bits_ = s.bits;
  phases_ = s.phases;
}

}  // namespace shallowlab
