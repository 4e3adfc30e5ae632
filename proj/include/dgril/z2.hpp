#ifndef DGRIL_Z2_HPP
#define DGRIL_Z2_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dgril {

/// Fixed-length vector over the two-element field.
///
/// Words are stored inline up to 256 bits, which covers the sublevel
/// complexes of every graph in the usual TU benchmarks without touching the
/// heap.
class BitVector {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BitVector() = default;
  explicit BitVector(std::size_t size);

  BitVector(const BitVector& other);
  BitVector& operator=(const BitVector& other);
  BitVector(BitVector&& other) noexcept;
  BitVector& operator=(BitVector&& other) noexcept;
  ~BitVector() = default;

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const {
    return (data()[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) { data()[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
  void reset(std::size_t i) {
    data()[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void flip(std::size_t i) { data()[i >> 6] ^= (std::uint64_t{1} << (i & 63)); }

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  BitVector& operator|=(const BitVector& other);

  bool none() const;
  bool any() const { return !none(); }
  std::size_t count() const;
  // Index of the highest set bit, or npos.
  std::size_t highest() const;
  // True iff every set bit of *this is also set in other.
  bool is_subset_of(const BitVector& other) const;

  bool operator==(const BitVector& other) const;
  bool operator!=(const BitVector& other) const { return !(*this == other); }

  std::size_t hash() const;
  std::string to_string() const;

  template <class F>
  void for_each_set(F&& f) const {
    const std::uint64_t* w = data();
    for (std::size_t k = 0; k < nwords_; ++k) {
      std::uint64_t word = w[k];
      while (word != 0) {
        int bit = __builtin_ctzll(word);
        f(k * 64 + static_cast<std::size_t>(bit));
        word &= word - 1;
      }
    }
  }

 private:
  static constexpr std::size_t kInlineWords = 4;

  std::uint64_t* data() {
    return nwords_ <= kInlineWords ? inline_.data() : heap_.data();
  }
  const std::uint64_t* data() const {
    return nwords_ <= kInlineWords ? inline_.data() : heap_.data();
  }

  std::size_t size_ = 0;
  std::size_t nwords_ = 0;
  std::array<std::uint64_t, kInlineWords> inline_{};
  std::vector<std::uint64_t> heap_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const { return v.hash(); }
};

/// Dense matrix over Z/2, stored column by column.
class Z2Matrix {
 public:
  Z2Matrix() = default;
  Z2Matrix(std::size_t rows, std::size_t cols);

  static Z2Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  bool at(std::size_t r, std::size_t c) const { return columns_[c].test(r); }
  void set(std::size_t r, std::size_t c, bool value);

  const BitVector& column(std::size_t c) const { return columns_[c]; }
  void set_column(std::size_t c, BitVector column);

  // y = A x.
  BitVector apply(const BitVector& x) const;
  std::size_t rank() const;
  // Basis of the null space, each vector of length cols().
  std::vector<BitVector> kernel() const;

  bool operator==(const Z2Matrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::vector<BitVector> columns_;
};

Z2Matrix operator*(const Z2Matrix& a, const Z2Matrix& b);

/// Incrementally built echelon basis of a subspace of F_2^dim.
///
/// Every stored vector has a distinct highest set bit (its pivot). An
/// optional tag vector rides along with each stored vector so callers can
/// recover which original inputs a reduction used.
class EchelonBasis {
 public:
  EchelonBasis() = default;
  explicit EchelonBasis(std::size_t dim, std::size_t tag_dim = 0);

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return vectors_.size(); }
  const std::vector<BitVector>& vectors() const { return vectors_; }

  // Reduces v in place; returns the XOR of tags of every row used.
  BitVector reduce(BitVector& v) const;
  bool contains(BitVector v) const;
  // Inserts v (with tag); returns false if v was already in the span.
  bool insert(BitVector v, BitVector tag = {});

 private:
  std::size_t dim_ = 0;
  std::size_t tag_dim_ = 0;
  std::vector<int> owner_;
  std::vector<BitVector> vectors_;
  std::vector<BitVector> tags_;
};

/// Subspace of F_2^dim given by a spanning set, kept in echelon form.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t dim) : basis_(dim) {}

  static Subspace whole(std::size_t dim);
  static Subspace span(std::size_t dim, const std::vector<BitVector>& gens);

  std::size_t ambient_dim() const { return basis_.dim(); }
  std::size_t dim() const { return basis_.rank(); }
  const std::vector<BitVector>& basis() const { return basis_.vectors(); }
  bool contains(const BitVector& v) const { return basis_.contains(v); }
  void add(const BitVector& v) { basis_.insert(v); }

  // f(S) for f: ambient -> codomain.
  Subspace image(const Z2Matrix& f) const;
  // {w : f(w) in S} for f: domain -> ambient.
  Subspace preimage(const Z2Matrix& f) const;
  Subspace operator+(const Subspace& other) const;

 private:
  EchelonBasis basis_;
};

}  // namespace dgril

#endif  // DGRIL_Z2_HPP
