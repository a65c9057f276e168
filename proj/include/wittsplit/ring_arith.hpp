#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wittsplit {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Elements are packed coefficient records: code = sum c_i * m^i with
// m = p^s and c_i in [0, m). The tag identifies (p, r, s) so mixed-context
// use is rejected.
struct FieldElement {
  uint32_t code = 0;
  uint32_t tag = 0;
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

struct GaloisRingElement {
  uint32_t code = 0;
  uint32_t tag = 0;
  friend bool operator==(const GaloisRingElement&, const GaloisRingElement&) = default;
};

namespace detail {

// Arithmetic core shared by fields (s = 1) and Galois rings GR(p^s, r).
class RingCore {
 public:
  RingCore(int p, int r, int s);

  int p, r, s;
  uint32_t m;     // p^s
  uint32_t size;  // m^r
  std::vector<uint32_t> modulus;  // x^r = -sum modulus[i] x^i (mod m)

  uint32_t add(uint32_t a, uint32_t b) const {
    return tabled_ ? add_tab_[a * size + b] : add_slow(a, b);
  }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return tabled_ ? mul_tab_[a * size + b] : mul_slow(a, b);
  }
  uint32_t neg(uint32_t a) const;
  uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
  uint32_t pow(uint32_t a, uint64_t e) const;
  uint32_t from_int(int64_t v) const;
  void unpack(uint32_t a, uint32_t* digits) const;
  uint32_t pack(const uint32_t* digits) const;
  uint32_t constant_term(uint32_t a) const { return a % m; }

 private:
  uint32_t add_slow(uint32_t a, uint32_t b) const;
  uint32_t mul_slow(uint32_t a, uint32_t b) const;
  bool tabled_ = false;
  std::vector<uint16_t> add_tab_, mul_tab_;
};

// Monic irreducible of degree r over F_p with the smallest index
// sum c_i p^i (constant term least significant). Returned constant term first,
// without the leading 1.
std::vector<uint32_t> smallest_irreducible(int p, int r);
bool is_irreducible_mod_p(const std::vector<uint32_t>& monic_low, int p);

}  // namespace detail

class FieldContext {
 public:
  FieldContext(int p, int r);

  int p() const { return core_.p; }
  int r() const { return core_.r; }
  uint32_t q() const { return core_.size; }
  uint32_t tag() const { return tag_; }
  // Monic defining polynomial, constant term first, length r + 1.
  std::vector<int> polynomial() const;

  FieldElement zero() const { return {0, tag_}; }
  FieldElement one() const { return {1, tag_}; }
  FieldElement from_int(int64_t v) const { return {core_.from_int(v), tag_}; }
  FieldElement from_coeffs(const std::vector<int>& c) const;
  FieldElement from_code(uint32_t code) const;
  std::vector<int> coeffs(FieldElement a) const;

  FieldElement add(FieldElement a, FieldElement b) const;
  FieldElement sub(FieldElement a, FieldElement b) const;
  FieldElement neg(FieldElement a) const;
  FieldElement mul(FieldElement a, FieldElement b) const;
  FieldElement inv(FieldElement a) const;
  FieldElement pow(FieldElement a, uint64_t e) const;
  FieldElement frobenius(FieldElement a) const;
  bool is_zero(FieldElement a) const { check(a); return a.code == 0; }

  FieldElement generator() const { return {generator_, tag_}; }
  std::vector<FieldElement> elements() const;
  std::string encode(FieldElement a) const;

  // Unchecked code-level arithmetic for inner loops.
  uint32_t add_raw(uint32_t a, uint32_t b) const { return core_.add(a, b); }
  uint32_t sub_raw(uint32_t a, uint32_t b) const { return core_.sub(a, b); }
  uint32_t neg_raw(uint32_t a) const { return core_.neg(a); }
  uint32_t mul_raw(uint32_t a, uint32_t b) const { return core_.mul(a, b); }
  uint32_t inv_raw(uint32_t a) const;
  uint32_t frob_raw(uint32_t a) const { return frob_[a]; }

  const detail::RingCore& core() const { return core_; }
  void check(FieldElement a) const;

 private:
  detail::RingCore core_;
  uint32_t tag_;
  uint32_t generator_ = 1;
  std::vector<uint32_t> inv_, frob_;
};

class WittRingContext {
 public:
  WittRingContext(int p, int r, int s);

  int p() const { return core_.p; }
  int r() const { return core_.r; }
  int s() const { return core_.s; }
  uint32_t size() const { return core_.size; }
  uint32_t tag() const { return tag_; }
  const FieldContext& residue_field() const { return field_; }
  std::vector<int> polynomial() const;

  GaloisRingElement zero() const { return {0, tag_}; }
  GaloisRingElement one() const { return {1, tag_}; }
  GaloisRingElement from_int(int64_t v) const { return {core_.from_int(v), tag_}; }
  GaloisRingElement from_coeffs(const std::vector<int>& c) const;
  GaloisRingElement from_code(uint32_t code) const;
  std::vector<int> coeffs(GaloisRingElement a) const;

  GaloisRingElement add(GaloisRingElement a, GaloisRingElement b) const;
  GaloisRingElement sub(GaloisRingElement a, GaloisRingElement b) const;
  GaloisRingElement neg(GaloisRingElement a) const;
  GaloisRingElement mul(GaloisRingElement a, GaloisRingElement b) const;
  GaloisRingElement pow(GaloisRingElement a, uint64_t e) const;
  GaloisRingElement inv(GaloisRingElement a) const;
  bool is_unit(GaloisRingElement a) const;

  GaloisRingElement reduce_to_level(GaloisRingElement a, const WittRingContext& lower) const;
  FieldElement to_field(GaloisRingElement a) const;
  // Digit-wise lift with coefficients in [0, p).
  GaloisRingElement lift(FieldElement a) const;
  GaloisRingElement teichmuller(FieldElement a) const;
  GaloisRingElement frobenius(GaloisRingElement a) const;
  FieldElement lie_coordinate(GaloisRingElement z) const;
  GaloisRingElement lie_embed(FieldElement x) const;
  std::string encode(GaloisRingElement a) const;

  uint32_t add_raw(uint32_t a, uint32_t b) const { return core_.add(a, b); }
  uint32_t sub_raw(uint32_t a, uint32_t b) const { return core_.sub(a, b); }
  uint32_t neg_raw(uint32_t a) const { return core_.neg(a); }
  uint32_t mul_raw(uint32_t a, uint32_t b) const { return core_.mul(a, b); }
  uint32_t inv_raw(uint32_t a) const;
  uint32_t frob_raw(uint32_t a) const;
  bool is_unit_raw(uint32_t a) const { return to_field_raw(a) != 0; }
  uint32_t to_field_raw(uint32_t a) const;
  uint32_t lift_raw(uint32_t field_code) const;
  uint32_t teich_raw(uint32_t field_code) const { return teich_[field_code]; }
  // Code of x with p^(s-1)*x = z, z divisible by p^(s-1); returned as field code.
  uint32_t lie_coordinate_raw(uint32_t z) const;
  uint32_t lie_embed_raw(uint32_t x) const;
  // Reduce a code to level s' < s (digit-wise mod p^s').
  uint32_t reduce_raw(uint32_t a, int lower_s) const;
  // Lift a code from level s' < s digit-wise.
  uint32_t lift_from_level_raw(uint32_t a, int lower_s) const;

  const detail::RingCore& core() const { return core_; }
  void check(GaloisRingElement a) const;

 private:
  detail::RingCore core_;
  FieldContext field_;
  uint32_t tag_;
  std::vector<uint32_t> teich_;  // indexed by field code
  std::vector<uint32_t> frob_;   // full table when the ring is small
  std::vector<uint32_t> sigma_x_pows_;  // sigma(x)^i, i < r
};

}  // namespace wittsplit
