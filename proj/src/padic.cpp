#include "cyfrob/padic.hpp"

#include <algorithm>
#include <cstring>

namespace cyfrob {

ResidueModPk ResidueModPk::make(u64 p, int k, const mpz_class& x) {
  if (k < 1) throw UsageError("residue accuracy must be at least 1");
  ResidueModPk r{p, k, x};
  mpz_class m = pow_ui(p, k);
  mpz_mod(r.value.get_mpz_t(), r.value.get_mpz_t(), m.get_mpz_t());
  return r;
}

namespace {

void check_same(const ResidueModPk& a, const ResidueModPk& b) {
  if (a.p != b.p || a.k != b.k) throw UsageError("residue modulus mismatch");
}

}  // namespace

ResidueModPk operator+(const ResidueModPk& a, const ResidueModPk& b) {
  check_same(a, b);
  return ResidueModPk::make(a.p, a.k, a.value + b.value);
}

ResidueModPk operator-(const ResidueModPk& a, const ResidueModPk& b) {
  check_same(a, b);
  return ResidueModPk::make(a.p, a.k, a.value - b.value);
}

ResidueModPk operator*(const ResidueModPk& a, const ResidueModPk& b) {
  check_same(a, b);
  return ResidueModPk::make(a.p, a.k, a.value * b.value);
}

ResidueModPk inverse(const ResidueModPk& a) {
  mpz_class m = a.modulus(), r;
  if (!mpz_invert(r.get_mpz_t(), a.value.get_mpz_t(), m.get_mpz_t()))
    throw ArithmeticError("residue is not invertible");
  return ResidueModPk{a.p, a.k, r};
}

ResidueModPk pow(const ResidueModPk& a, const mpz_class& e) {
  mpz_class m = a.modulus(), r;
  if (e < 0) return pow(inverse(a), -e);
  mpz_powm(r.get_mpz_t(), a.value.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return ResidueModPk{a.p, a.k, r};
}

ScaledPadic ScaledPadic::zero(u64 p, int accuracy) {
  ScaledPadic z;
  z.p_ = p;
  z.acc_ = accuracy;
  z.zero_ = true;
  return z;
}

ScaledPadic ScaledPadic::from_scaled(u64 p, int accuracy, const mpz_class& X, int e) {
  if (X == 0) return zero(p, accuracy);
  mpz_class u = X, pp = p;
  int v = e + static_cast<int>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), pp.get_mpz_t()));
  if (v >= accuracy) return zero(p, accuracy);
  ScaledPadic s;
  s.p_ = p;
  s.acc_ = accuracy;
  s.val_ = v;
  s.zero_ = false;
  s.unit_ = ResidueModPk::make(p, accuracy - v, u);
  return s;
}

ScaledPadic ScaledPadic::from_integer(u64 p, int accuracy, const mpz_class& x) {
  return from_scaled(p, accuracy, x, 0);
}

ScaledPadic ScaledPadic::from_rational(u64 p, int accuracy, const mpq_class& x) {
  if (x == 0) return zero(p, accuracy);
  mpz_class num = x.get_num(), den = x.get_den(), pp = p;
  int vn = static_cast<int>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), pp.get_mpz_t()));
  int vd = static_cast<int>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), pp.get_mpz_t()));
  int v = vn - vd;
  if (v >= accuracy) return zero(p, accuracy);
  mpz_class m = pow_ui(p, accuracy - v), inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  ScaledPadic s;
  s.p_ = p;
  s.acc_ = accuracy;
  s.val_ = v;
  s.zero_ = false;
  s.unit_ = ResidueModPk::make(p, accuracy - v, num * inv);
  return s;
}

int ScaledPadic::valuation() const {
  if (zero_) throw ArithmeticError("valuation of a zero element");
  return val_;
}

mpq_class ScaledPadic::representative() const {
  if (zero_) return 0;
  mpz_class pv = pow_ui(p_, static_cast<unsigned long>(std::abs(val_)));
  mpq_class r(unit_.value);
  if (val_ >= 0)
    r *= pv;
  else
    r /= pv;
  return r;
}

ScaledPadic ScaledPadic::with_accuracy(int a) const {
  if (a >= acc_) return *this;
  if (zero_ || val_ >= a) return zero(p_, a);
  ScaledPadic s = *this;
  s.acc_ = a;
  s.unit_ = ResidueModPk::make(p_, a - val_, unit_.value);
  return s;
}

namespace {

// lower bound for the valuation, usable for zero elements too
int val_bound(const ScaledPadic& x) { return x.is_zero() ? x.known_accuracy() : x.valuation(); }

}  // namespace

ScaledPadic scaled_arith(const ScaledPadic& a, const ScaledPadic& b, ArithOp which) {
  if (a.prime() != b.prime()) throw UsageError("prime mismatch in p-adic arithmetic");
  const u64 p = a.prime();
  switch (which) {
    case ArithOp::add:
    case ArithOp::sub: {
      const int acc = std::min(a.known_accuracy(), b.known_accuracy());
      const int e = std::min(val_bound(a), val_bound(b));
      if (e >= acc) return ScaledPadic::zero(p, acc);
      mpz_class X = 0;
      if (!a.is_zero()) X += a.unit().value * pow_ui(p, a.valuation() - e);
      mpz_class Y = 0;
      if (!b.is_zero()) Y = b.unit().value * pow_ui(p, b.valuation() - e);
      X = which == ArithOp::add ? mpz_class(X + Y) : mpz_class(X - Y);
      mpz_class m = pow_ui(p, acc - e);
      mpz_mod(X.get_mpz_t(), X.get_mpz_t(), m.get_mpz_t());
      return ScaledPadic::from_scaled(p, acc, X, e);
    }
    case ArithOp::mul: {
      if (a.is_zero() || b.is_zero()) {
        const int acc = std::min(a.known_accuracy() + val_bound(b), b.known_accuracy() + val_bound(a));
        return ScaledPadic::zero(p, acc);
      }
      const int v = a.valuation() + b.valuation();
      const int rel = std::min(a.relative_precision(), b.relative_precision());
      mpz_class m = pow_ui(p, rel), u = a.unit().value * b.unit().value;
      mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
      return ScaledPadic::from_scaled(p, v + rel, u, v);
    }
    case ArithOp::div: {
      if (b.is_zero()) throw ArithmeticError("division by an exact zero");
      if (a.is_zero()) return ScaledPadic::zero(p, a.known_accuracy() - b.valuation());
      const int v = a.valuation() - b.valuation();
      const int rel = std::min(a.relative_precision(), b.relative_precision());
      mpz_class m = pow_ui(p, rel), inv;
      mpz_invert(inv.get_mpz_t(), b.unit().value.get_mpz_t(), m.get_mpz_t());
      mpz_class u = a.unit().value * inv;
      mpz_mod(u.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
      return ScaledPadic::from_scaled(p, v + rel, u, v);
    }
  }
  throw UsageError("unknown arithmetic operation");
}

bool agrees_with(const ScaledPadic& a, const mpq_class& y) {
  mpq_class d = a.representative() - y;
  if (d == 0) return true;
  return valuation(d, a.prime()) >= a.known_accuracy();
}

ResidueModPk teichmuller_lift(u64 x, u64 p, int k) {
  if (x % p == 0) throw ArithmeticError("no Teichmuller lift of 0 mod p");
  mpz_class m = pow_ui(p, k), t = x % p, e = p;
  for (int it = 0; it < k + 1; ++it) {
    mpz_class next;
    mpz_powm(next.get_mpz_t(), t.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    if (next == t) break;
    t = next;
  }
  return ResidueModPk{p, k, t};
}

mpz_class balanced_lift(const mpz_class& x, const mpz_class& m) {
  mpz_class y;
  mpz_mod(y.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  // -m/2 < y <= m/2
  if (2 * y > m) y -= m;
  return y;
}

mpz_class balanced_lift(const ResidueModPk& x) { return balanced_lift(x.value, x.modulus()); }

mpz_class reduce_rational(const mpq_class& x, const mpz_class& m) {
  mpz_class inv;
  if (!mpz_invert(inv.get_mpz_t(), x.get_den_mpz_t(), m.get_mpz_t()))
    throw ArithmeticError("rational is not integral at p");
  mpz_class r = x.get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

ResidueArray::ResidueArray(std::size_t n, const mpz_class& modulus) : n_(n), mod_(modulus) {
  width_ = std::max<std::size_t>(1, mpz_size(modulus.get_mpz_t()));
  data_.assign(n * width_, 0);
}

void ResidueArray::get(std::size_t i, mpz_t out) const {
  const mp_limb_t* src = limbs(i);
  std::size_t n = width_;
  while (n > 0 && src[n - 1] == 0) --n;
  mp_limb_t* dst = mpz_limbs_write(out, std::max<std::size_t>(n, 1));
  std::memcpy(dst, src, n * sizeof(mp_limb_t));
  mpz_limbs_finish(out, static_cast<mp_size_t>(n));
}

mpz_class ResidueArray::get(std::size_t i) const {
  mpz_class r;
  get(i, r.get_mpz_t());
  return r;
}

void ResidueArray::set(std::size_t i, mpz_srcptr v) {
  const std::size_t n = mpz_size(v);
  if (mpz_sgn(v) < 0 || n > width_) throw UsageError("residue out of range for packed storage");
  mp_limb_t* dst = data_.data() + i * width_;
  if (n) std::memcpy(dst, mpz_limbs_read(v), n * sizeof(mp_limb_t));
  std::fill(dst + n, dst + width_, 0);
}

void ResidueArray::set(std::size_t i, const mpz_class& v) { set(i, v.get_mpz_t()); }

}  // namespace cyfrob
