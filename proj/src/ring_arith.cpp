#include "wittsplit/ring_arith.hpp"

#include <algorithm>
#include <sstream>

namespace wittsplit {
namespace detail {

namespace {

uint32_t ipow(uint32_t b, int e) {
  uint32_t v = 1;
  for (int i = 0; i < e; ++i) v *= b;
  return v;
}

constexpr int kMaxDegree = 4;
constexpr uint32_t kTableLimit = 1024;

// Remainder of a by monic b over F_p; both constant term first.
std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& b, int p) {
  const int db = static_cast<int>(b.size()) - 1;
  for (int k = static_cast<int>(a.size()) - 1; k >= db; --k) {
    const int c = ((a[k] % p) + p) % p;
    if (c == 0) continue;
    for (int i = 0; i <= db; ++i) a[k - db + i] = ((a[k - db + i] - c * b[i]) % p + p) % p;
  }
  a.resize(std::max(db, 0));
  return a;
}

}  // namespace

bool is_irreducible_mod_p(const std::vector<uint32_t>& low, int p) {
  const int r = static_cast<int>(low.size());
  std::vector<int> f(low.begin(), low.end());
  f.push_back(1);
  for (int d = 1; 2 * d <= r; ++d) {
    const uint32_t count = ipow(p, d);
    for (uint32_t idx = 0; idx < count; ++idx) {
      std::vector<int> g(d + 1, 1);
      uint32_t t = idx;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<int>(t % p);
        t /= p;
      }
      auto rem = poly_mod(f, g, p);
      if (std::all_of(rem.begin(), rem.end(), [](int v) { return v == 0; })) return false;
    }
  }
  return true;
}

std::vector<uint32_t> smallest_irreducible(int p, int r) {
  if (r == 1) return {0};
  const uint32_t count = ipow(p, r);
  for (uint32_t idx = 0; idx < count; ++idx) {
    std::vector<uint32_t> low(r);
    uint32_t t = idx;
    for (int i = 0; i < r; ++i) {
      low[i] = t % p;
      t /= p;
    }
    if (is_irreducible_mod_p(low, p)) return low;
  }
  throw DomainError("no irreducible polynomial found");
}

RingCore::RingCore(int p_, int r_, int s_) : p(p_), r(r_), s(s_) {
  if (p < 2 || r < 1 || r > kMaxDegree || s < 1 || s > 3)
    throw DomainError("unsupported ring parameters");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw DomainError("characteristic must be prime");
  m = ipow(p, s);
  size = ipow(m, r);
  modulus = smallest_irreducible(p, r);
  if (size <= kTableLimit) {
    add_tab_.resize(size * size);
    mul_tab_.resize(size * size);
    for (uint32_t a = 0; a < size; ++a)
      for (uint32_t b = 0; b < size; ++b) {
        add_tab_[a * size + b] = static_cast<uint16_t>(add_slow(a, b));
        mul_tab_[a * size + b] = static_cast<uint16_t>(mul_slow(a, b));
      }
    tabled_ = true;
  }
}

void RingCore::unpack(uint32_t a, uint32_t* d) const {
  for (int i = 0; i < r; ++i) {
    d[i] = a % m;
    a /= m;
  }
}

uint32_t RingCore::pack(const uint32_t* d) const {
  uint32_t v = 0;
  for (int i = r - 1; i >= 0; --i) v = v * m + d[i];
  return v;
}

uint32_t RingCore::add_slow(uint32_t a, uint32_t b) const {
  uint32_t x[kMaxDegree], y[kMaxDegree];
  unpack(a, x);
  unpack(b, y);
  for (int i = 0; i < r; ++i) x[i] = (x[i] + y[i]) % m;
  return pack(x);
}

uint32_t RingCore::neg(uint32_t a) const {
  uint32_t x[kMaxDegree];
  unpack(a, x);
  for (int i = 0; i < r; ++i) x[i] = (m - x[i]) % m;
  return pack(x);
}

uint32_t RingCore::mul_slow(uint32_t a, uint32_t b) const {
  uint32_t x[kMaxDegree], y[kMaxDegree];
  unpack(a, x);
  unpack(b, y);
  uint64_t prod[2 * kMaxDegree] = {};
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + uint64_t(x[i]) * y[j]) % m;
  for (int k = 2 * r - 2; k >= r; --k) {
    const uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (int i = 0; i < r; ++i) prod[k - r + i] = (prod[k - r + i] + (m - modulus[i]) % m * c) % m;
  }
  uint32_t out[kMaxDegree];
  for (int i = 0; i < r; ++i) out[i] = static_cast<uint32_t>(prod[i]);
  return pack(out);
}

uint32_t RingCore::pow(uint32_t a, uint64_t e) const {
  uint32_t result = 1, base = a;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

uint32_t RingCore::from_int(int64_t v) const {
  const int64_t mm = m;
  return static_cast<uint32_t>(((v % mm) + mm) % mm);
}

}  // namespace detail

namespace {

uint32_t make_tag(int p, int r, int s) {
  return static_cast<uint32_t>(p) | (static_cast<uint32_t>(r) << 8) | (static_cast<uint32_t>(s) << 16);
}

std::vector<uint32_t> prime_factors(uint32_t n) {
  std::vector<uint32_t> out;
  for (uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::string encode_digits(const detail::RingCore& core, uint32_t code) {
  uint32_t d[4];
  core.unpack(code, d);
  std::ostringstream os;
  for (int i = 0; i < core.r; ++i) {
    if (i) os << ',';
    os << d[i];
  }
  return os.str();
}

uint32_t code_from_coeffs(const detail::RingCore& core, const std::vector<int>& c) {
  if (static_cast<int>(c.size()) > core.r) throw DomainError("too many coefficients");
  uint32_t d[4] = {0, 0, 0, 0};
  for (size_t i = 0; i < c.size(); ++i) d[i] = core.from_int(c[i]);
  return core.pack(d);
}

}  // namespace

// ---------------------------------------------------------------- FieldContext

FieldContext::FieldContext(int p, int r) : core_(p, r, 1), tag_(make_tag(p, r, 1)) {
  const uint32_t q = core_.size;
  inv_.assign(q, 0);
  for (uint32_t a = 1; a < q; ++a) inv_[a] = core_.pow(a, q - 2);
  for (uint32_t a = 1; a < q; ++a)
    if (core_.mul(a, inv_[a]) != 1) throw DomainError("defining polynomial is not irreducible");
  frob_.resize(q);
  for (uint32_t a = 0; a < q; ++a) frob_[a] = core_.pow(a, p);
  const auto primes = prime_factors(q - 1);
  generator_ = 0;
  for (uint32_t g = 1; g < q && generator_ == 0; ++g) {
    bool ok = true;
    for (uint32_t l : primes)
      if (core_.pow(g, (q - 1) / l) == 1) ok = false;
    if (ok) generator_ = g;
  }
  if (q == 2) generator_ = 1;
  if (generator_ == 0) throw DomainError("multiplicative group is not cyclic");
}

std::vector<int> FieldContext::polynomial() const {
  std::vector<int> out(core_.modulus.begin(), core_.modulus.end());
  out.push_back(1);
  return out;
}

void FieldContext::check(FieldElement a) const {
  if (a.tag != tag_ || a.code >= core_.size) throw DomainError("field element from a different context");
}

FieldElement FieldContext::from_coeffs(const std::vector<int>& c) const {
  return {code_from_coeffs(core_, c), tag_};
}

FieldElement FieldContext::from_code(uint32_t code) const {
  if (code >= core_.size) throw DomainError("field code out of range");
  return {code, tag_};
}

std::vector<int> FieldContext::coeffs(FieldElement a) const {
  check(a);
  uint32_t d[4];
  core_.unpack(a.code, d);
  return std::vector<int>(d, d + core_.r);
}

FieldElement FieldContext::add(FieldElement a, FieldElement b) const {
  check(a), check(b);
  return {core_.add(a.code, b.code), tag_};
}
FieldElement FieldContext::sub(FieldElement a, FieldElement b) const {
  check(a), check(b);
  return {core_.sub(a.code, b.code), tag_};
}
FieldElement FieldContext::neg(FieldElement a) const {
  check(a);
  return {core_.neg(a.code), tag_};
}
FieldElement FieldContext::mul(FieldElement a, FieldElement b) const {
  check(a), check(b);
  return {core_.mul(a.code, b.code), tag_};
}
FieldElement FieldContext::inv(FieldElement a) const {
  check(a);
  return {inv_raw(a.code), tag_};
}
FieldElement FieldContext::pow(FieldElement a, uint64_t e) const {
  check(a);
  return {core_.pow(a.code, e), tag_};
}
FieldElement FieldContext::frobenius(FieldElement a) const {
  check(a);
  return {frob_[a.code], tag_};
}

uint32_t FieldContext::inv_raw(uint32_t a) const {
  if (a == 0) throw DomainError("inverse of zero");
  return inv_[a];
}

std::vector<FieldElement> FieldContext::elements() const {
  std::vector<FieldElement> out;
  out.reserve(core_.size);
  for (uint32_t a = 0; a < core_.size; ++a) out.push_back({a, tag_});
  return out;
}

std::string FieldContext::encode(FieldElement a) const {
  check(a);
  return encode_digits(core_, a.code);
}

// ------------------------------------------------------------- WittRingContext

WittRingContext::WittRingContext(int p, int r, int s)
    : core_(p, r, s), field_(p, r), tag_(make_tag(p, r, s)) {
  const uint32_t q = field_.q();
  uint64_t qs = 1;
  for (int i = 1; i < s; ++i) qs *= q;
  teich_.resize(q);
  for (uint32_t a = 0; a < q; ++a) teich_[a] = core_.pow(lift_raw(a), qs);
  for (uint32_t a = 0; a < q; ++a) {
    if (core_.pow(teich_[a], q) != teich_[a] || to_field_raw(teich_[a]) != a)
      throw DomainError("Teichmueller closed form failed its invariant");
  }

  // sigma(x): the root of the defining polynomial lifting x^p.
  const uint32_t x = r >= 2 ? core_.m : 0;  // code of the class of x
  if (r >= 2) {
    const uint32_t target = field_.frob_raw(to_field_raw(x));
    uint32_t root = UINT32_MAX;
    for (uint32_t y = 0; y < core_.size && root == UINT32_MAX; ++y) {
      if (to_field_raw(y) != target) continue;
      uint32_t val = core_.pow(y, r);
      for (int i = 0; i < r; ++i) val = core_.add(val, core_.mul(core_.modulus[i], core_.pow(y, i)));
      if (val == 0) root = y;
    }
    if (root == UINT32_MAX) throw DomainError("no Frobenius lift of the generator");
    for (int i = 0; i < r; ++i) sigma_x_pows_.push_back(core_.pow(root, i));
  } else {
    sigma_x_pows_.push_back(1);
  }
  if (core_.size <= (1u << 16)) {
    frob_.resize(core_.size);
    for (uint32_t a = 0; a < core_.size; ++a) {
      uint32_t d[4];
      core_.unpack(a, d);
      uint32_t v = 0;
      for (int i = 0; i < r; ++i) v = core_.add(v, core_.mul(d[i], sigma_x_pows_[i]));
      frob_[a] = v;
    }
  }
}

std::vector<int> WittRingContext::polynomial() const {
  std::vector<int> out(core_.modulus.begin(), core_.modulus.end());
  out.push_back(1);
  return out;
}

void WittRingContext::check(GaloisRingElement a) const {
  if (a.tag != tag_ || a.code >= core_.size) throw DomainError("ring element from a different context");
}

GaloisRingElement WittRingContext::from_coeffs(const std::vector<int>& c) const {
  return {code_from_coeffs(core_, c), tag_};
}

GaloisRingElement WittRingContext::from_code(uint32_t code) const {
  if (code >= core_.size) throw DomainError("ring code out of range");
  return {code, tag_};
}

std::vector<int> WittRingContext::coeffs(GaloisRingElement a) const {
  check(a);
  uint32_t d[4];
  core_.unpack(a.code, d);
  return std::vector<int>(d, d + core_.r);
}

GaloisRingElement WittRingContext::add(GaloisRingElement a, GaloisRingElement b) const {
  check(a), check(b);
  return {core_.add(a.code, b.code), tag_};
}
GaloisRingElement WittRingContext::sub(GaloisRingElement a, GaloisRingElement b) const {
  check(a), check(b);
  return {core_.sub(a.code, b.code), tag_};
}
GaloisRingElement WittRingContext::neg(GaloisRingElement a) const {
  check(a);
  return {core_.neg(a.code), tag_};
}
GaloisRingElement WittRingContext::mul(GaloisRingElement a, GaloisRingElement b) const {
  check(a), check(b);
  return {core_.mul(a.code, b.code), tag_};
}
GaloisRingElement WittRingContext::pow(GaloisRingElement a, uint64_t e) const {
  check(a);
  return {core_.pow(a.code, e), tag_};
}
GaloisRingElement WittRingContext::inv(GaloisRingElement a) const {
  check(a);
  return {inv_raw(a.code), tag_};
}
bool WittRingContext::is_unit(GaloisRingElement a) const {
  check(a);
  return is_unit_raw(a.code);
}

uint32_t WittRingContext::inv_raw(uint32_t a) const {
  if (!is_unit_raw(a)) throw DomainError("inverse of a non-unit");
  const uint64_t q = field_.q();
  uint64_t order = q - 1;
  for (int i = 1; i < core_.s; ++i) order *= q;
  return core_.pow(a, order - 1);
}

uint32_t WittRingContext::to_field_raw(uint32_t a) const { return reduce_raw(a, 1); }

uint32_t WittRingContext::reduce_raw(uint32_t a, int lower_s) const {
  if (lower_s > core_.s || lower_s < 1) throw DomainError("invalid reduction level");
  uint32_t d[4];
  core_.unpack(a, d);
  const uint32_t lm = detail::ipow(core_.p, lower_s);
  uint32_t v = 0;
  for (int i = core_.r - 1; i >= 0; --i) v = v * lm + d[i] % lm;
  return v;
}

uint32_t WittRingContext::lift_from_level_raw(uint32_t a, int lower_s) const {
  const uint32_t lm = detail::ipow(core_.p, lower_s);
  uint32_t d[4];
  for (int i = 0; i < core_.r; ++i) {
    d[i] = a % lm;
    a /= lm;
  }
  return core_.pack(d);
}

uint32_t WittRingContext::lift_raw(uint32_t field_code) const { return lift_from_level_raw(field_code, 1); }

GaloisRingElement WittRingContext::reduce_to_level(GaloisRingElement a, const WittRingContext& lower) const {
  check(a);
  if (lower.p() != p() || lower.r() != r() || lower.s() > s())
    throw DomainError("reduction target is not a lower level of this ring");
  return {reduce_raw(a.code, lower.s()), lower.tag()};
}

FieldElement WittRingContext::to_field(GaloisRingElement a) const {
  check(a);
  return {to_field_raw(a.code), field_.tag()};
}

GaloisRingElement WittRingContext::lift(FieldElement a) const {
  field_.check(a);
  return {lift_raw(a.code), tag_};
}

GaloisRingElement WittRingContext::teichmuller(FieldElement a) const {
  field_.check(a);
  return {teich_[a.code], tag_};
}

uint32_t WittRingContext::frob_raw(uint32_t a) const {
  if (!frob_.empty()) return frob_[a];
  uint32_t d[4];
  core_.unpack(a, d);
  uint32_t v = 0;
  for (int i = 0; i < core_.r; ++i) v = core_.add(v, core_.mul(d[i], sigma_x_pows_[i]));
  return v;
}

GaloisRingElement WittRingContext::frobenius(GaloisRingElement a) const {
  check(a);
  return {frob_raw(a.code), tag_};
}

uint32_t WittRingContext::lie_coordinate_raw(uint32_t z) const {
  const uint32_t unit = detail::ipow(core_.p, core_.s - 1);
  uint32_t d[4];
  core_.unpack(z, d);
  uint32_t v = 0;
  for (int i = core_.r - 1; i >= 0; --i) {
    if (d[i] % unit != 0) throw DomainError("element is not divisible by p^(s-1)");
    v = v * core_.p + d[i] / unit;
  }
  return v;
}

uint32_t WittRingContext::lie_embed_raw(uint32_t x) const {
  const uint32_t unit = detail::ipow(core_.p, core_.s - 1);
  uint32_t d[4];
  for (int i = 0; i < core_.r; ++i) {
    d[i] = (x % core_.p) * unit;
    x /= core_.p;
  }
  return core_.pack(d);
}

FieldElement WittRingContext::lie_coordinate(GaloisRingElement z) const {
  check(z);
  return {lie_coordinate_raw(z.code), field_.tag()};
}

GaloisRingElement WittRingContext::lie_embed(FieldElement x) const {
  field_.check(x);
  return {lie_embed_raw(x.code), tag_};
}

std::string WittRingContext::encode(GaloisRingElement a) const {
  check(a);
  return encode_digits(core_, a.code);
}

}  // namespace wittsplit
