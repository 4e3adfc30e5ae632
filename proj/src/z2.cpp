#include "dgril/z2.hpp"

#include <algorithm>
#include <stdexcept>

namespace dgril {

BitVector::BitVector(std::size_t size) : size_(size), nwords_((size + 63) / 64) {
  if (nwords_ > kInlineWords) heap_.assign(nwords_, 0);
}

BitVector::BitVector(const BitVector& other)
    : size_(other.size_), nwords_(other.nwords_), inline_(other.inline_),
      heap_(other.heap_) {}

BitVector& BitVector::operator=(const BitVector& other) {
  if (this != &other) {
    size_ = other.size_;
    nwords_ = other.nwords_;
    inline_ = other.inline_;
    heap_ = other.heap_;
  }
  return *this;
}

BitVector::BitVector(BitVector&& other) noexcept
    : size_(other.size_), nwords_(other.nwords_), inline_(other.inline_),
      heap_(std::move(other.heap_)) {
  other.size_ = 0;
  other.nwords_ = 0;
}

BitVector& BitVector::operator=(BitVector&& other) noexcept {
  if (this != &other) {
    size_ = other.size_;
    nwords_ = other.nwords_;
    inline_ = other.inline_;
    heap_ = std::move(other.heap_);
    other.size_ = 0;
    other.nwords_ = 0;
  }
  return *this;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector: size mismatch");
  std::uint64_t* a = data();
  const std::uint64_t* b = other.data();
  for (std::size_t k = 0; k < nwords_; ++k) a[k] ^= b[k];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector: size mismatch");
  std::uint64_t* a = data();
  const std::uint64_t* b = other.data();
  for (std::size_t k = 0; k < nwords_; ++k) a[k] &= b[k];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("BitVector: size mismatch");
  std::uint64_t* a = data();
  const std::uint64_t* b = other.data();
  for (std::size_t k = 0; k < nwords_; ++k) a[k] |= b[k];
  return *this;
}

bool BitVector::none() const {
  const std::uint64_t* w = data();
  for (std::size_t k = 0; k < nwords_; ++k)
    if (w[k] != 0) return false;
  return true;
}

std::size_t BitVector::count() const {
  const std::uint64_t* w = data();
  std::size_t c = 0;
  for (std::size_t k = 0; k < nwords_; ++k) c += static_cast<std::size_t>(__builtin_popcountll(w[k]));
  return c;
}

std::size_t BitVector::highest() const {
  const std::uint64_t* w = data();
  for (std::size_t k = nwords_; k-- > 0;) {
    if (w[k] != 0) return k * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(w[k]));
  }
  return npos;
}

bool BitVector::is_subset_of(const BitVector& other) const {
  if (other.size_ != size_) throw std::invalid_argument("BitVector: size mismatch");
  const std::uint64_t* a = data();
  const std::uint64_t* b = other.data();
  for (std::size_t k = 0; k < nwords_; ++k)
    if ((a[k] & ~b[k]) != 0) return false;
  return true;
}

bool BitVector::operator==(const BitVector& other) const {
  if (size_ != other.size_) return false;
  return std::equal(data(), data() + nwords_, other.data());
}

std::size_t BitVector::hash() const {
  // FNV-1a over the words.
  std::uint64_t h = 1469598103934665603ull ^ size_;
  const std::uint64_t* w = data();
  for (std::size_t k = 0; k < nwords_; ++k) {
    h ^= w[k];
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (test(i)) s[i] = '1';
  return s;
}

Z2Matrix::Z2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), columns_(cols, BitVector(rows)) {}

Z2Matrix Z2Matrix::identity(std::size_t n) {
  Z2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.columns_[i].set(i);
  return m;
}

void Z2Matrix::set(std::size_t r, std::size_t c, bool value) {
  if (value)
    columns_[c].set(r);
  else
    columns_[c].reset(r);
}

void Z2Matrix::set_column(std::size_t c, BitVector column) {
  if (column.size() != rows_) throw std::invalid_argument("Z2Matrix: column length mismatch");
  columns_[c] = std::move(column);
}

BitVector Z2Matrix::apply(const BitVector& x) const {
  if (x.size() != cols()) throw std::invalid_argument("Z2Matrix::apply: shape mismatch");
  BitVector y(rows_);
  x.for_each_set([&](std::size_t c) { y ^= columns_[c]; });
  return y;
}

std::size_t Z2Matrix::rank() const {
  EchelonBasis basis(rows_);
  for (const auto& col : columns_) basis.insert(col);
  return basis.rank();
}

std::vector<BitVector> Z2Matrix::kernel() const {
  EchelonBasis basis(rows_, cols());
  std::vector<BitVector> out;
  for (std::size_t c = 0; c < cols(); ++c) {
    BitVector v = columns_[c];
    BitVector tag(cols());
    tag.set(c);
    BitVector used = basis.reduce(v);
    if (v.none()) {
      tag ^= used;
      out.push_back(std::move(tag));
    } else {
      used ^= tag;
      basis.insert(std::move(v), std::move(used));
    }
  }
  return out;
}

bool Z2Matrix::operator==(const Z2Matrix& other) const {
  return rows_ == other.rows_ && columns_ == other.columns_;
}

Z2Matrix operator*(const Z2Matrix& a, const Z2Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Z2Matrix: product shape mismatch");
  Z2Matrix out(a.rows(), b.cols());
  for (std::size_t c = 0; c < b.cols(); ++c) out.set_column(c, a.apply(b.column(c)));
  return out;
}

EchelonBasis::EchelonBasis(std::size_t dim, std::size_t tag_dim)
    : dim_(dim), tag_dim_(tag_dim), owner_(dim, -1) {}

BitVector EchelonBasis::reduce(BitVector& v) const {
  BitVector used(tag_dim_);
  for (;;) {
    std::size_t p = v.highest();
    if (p == BitVector::npos) break;
    int o = owner_[p];
    if (o < 0) break;
    v ^= vectors_[static_cast<std::size_t>(o)];
    if (tag_dim_ > 0) used ^= tags_[static_cast<std::size_t>(o)];
  }
  return used;
}

bool EchelonBasis::contains(BitVector v) const {
  reduce(v);
  return v.none();
}

bool EchelonBasis::insert(BitVector v, BitVector tag) {
  if (v.size() != dim_) throw std::invalid_argument("EchelonBasis: vector length mismatch");
  if (tag_dim_ > 0) {
    if (tag.size() != tag_dim_) throw std::invalid_argument("EchelonBasis: tag length mismatch");
    tag ^= reduce(v);
  } else {
    reduce(v);
  }
  std::size_t p = v.highest();
  if (p == BitVector::npos) return false;
  owner_[p] = static_cast<int>(vectors_.size());
  vectors_.push_back(std::move(v));
  tags_.push_back(std::move(tag));
  return true;
}

Subspace Subspace::whole(std::size_t dim) {
  Subspace s(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    BitVector e(dim);
    e.set(i);
    s.add(e);
  }
  return s;
}

Subspace Subspace::span(std::size_t dim, const std::vector<BitVector>& gens) {
  Subspace s(dim);
  for (const auto& g : gens) s.add(g);
  return s;
}

Subspace Subspace::image(const Z2Matrix& f) const {
  if (f.cols() != ambient_dim()) throw std::invalid_argument("Subspace::image: shape mismatch");
  Subspace out(f.rows());
  for (const auto& v : basis()) out.add(f.apply(v));
  return out;
}

Subspace Subspace::preimage(const Z2Matrix& f) const {
  if (f.rows() != ambient_dim()) throw std::invalid_argument("Subspace::preimage: shape mismatch");
  // Kernel of the composite domain -> ambient -> ambient / S.
  const std::size_t n = f.cols();
  EchelonBasis residues(ambient_dim(), n);
  Subspace out(n);
  for (std::size_t c = 0; c < n; ++c) {
    BitVector r = f.column(c);
    basis_.reduce(r);
    BitVector tag(n);
    tag.set(c);
    BitVector used = residues.reduce(r);
    tag ^= used;
    if (r.none())
      out.add(tag);
    else
      residues.insert(std::move(r), std::move(tag));
  }
  return out;
}

Subspace Subspace::operator+(const Subspace& other) const {
  if (other.ambient_dim() != ambient_dim()) throw std::invalid_argument("Subspace: dimension mismatch");
  Subspace out = *this;
  for (const auto& v : other.basis()) out.add(v);
  return out;
}

}  // namespace dgril
