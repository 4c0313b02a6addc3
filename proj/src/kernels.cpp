#include "cyfrob/kernels.hpp"

#include <algorithm>
#include <cstring>

#include <omp.h>

namespace cyfrob::kernels {

namespace {

void reduce(mpz_class& x, const mpz_class& m) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()); }

std::size_t limbs_for_bits(std::size_t bits) { return (bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS; }

// pack values into fixed-width slots of w limbs
void pack(const std::vector<mpz_class>& v, std::size_t count, std::size_t w, std::vector<mp_limb_t>& out) {
  out.assign(count * w, 0);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = mpz_size(v[i].get_mpz_t());
    if (n) std::memcpy(out.data() + i * w, mpz_limbs_read(v[i].get_mpz_t()), n * sizeof(mp_limb_t));
  }
}

// full product of a and b (no truncation) reduced mod m
std::vector<mpz_class> kronecker_product(const std::vector<mpz_class>& a, std::size_t na,
                                         const std::vector<mpz_class>& b, std::size_t nb, std::size_t len,
                                         const mpz_class& m) {
  std::vector<mpz_class> out(len);
  if (na == 0 || nb == 0) return out;
  const std::size_t mbits = mpz_sizeinbase(m.get_mpz_t(), 2);
  std::size_t cbits = 0;
  for (std::size_t t = std::min(na, nb); t; t >>= 1) ++cbits;
  const std::size_t w = limbs_for_bits(2 * mbits + cbits + 1);

  std::vector<mp_limb_t> pa, pb;
  pack(a, na, w, pa);
  pack(b, nb, w, pb);
  mpz_t A, B;
  mpz_roinit_n(A, pa.data(), static_cast<mp_size_t>(pa.size()));
  mpz_roinit_n(B, pb.data(), static_cast<mp_size_t>(pb.size()));
  mpz_class P;
  mpz_mul(P.get_mpz_t(), A, B);
  std::vector<mp_limb_t>().swap(pa);
  std::vector<mp_limb_t>().swap(pb);

  const mp_limb_t* pl = mpz_limbs_read(P.get_mpz_t());
  const std::size_t plen = mpz_size(P.get_mpz_t());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t lo = i * w;
    if (lo >= plen) continue;
    const std::size_t n = std::min(w, plen - lo);
    mpz_t slot;
    mpz_roinit_n(slot, pl + lo, static_cast<mp_size_t>(n));
    mpz_mod(out[i].get_mpz_t(), slot, m.get_mpz_t());
  }
  return out;
}

}  // namespace

void convolve_schoolbook(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                         std::vector<mpz_class>& out, std::size_t len, const mpz_class& m) {
  out.assign(len, 0);
  for (std::size_t n = 0; n < len; ++n) {
    mpz_class& acc = out[n];
    const std::size_t lo = n >= b.size() ? n - b.size() + 1 : 0;
    for (std::size_t i = lo; i <= n && i < a.size(); ++i)
      mpz_addmul(acc.get_mpz_t(), a[i].get_mpz_t(), b[n - i].get_mpz_t());
    reduce(acc, m);
  }
}

void convolve_schoolbook_omp(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                             std::vector<mpz_class>& out, std::size_t len, const mpz_class& m) {
  out.assign(len, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t n = 0; n < len; ++n) {
    mpz_class acc = 0;
    const std::size_t lo = n >= b.size() ? n - b.size() + 1 : 0;
    for (std::size_t i = lo; i <= n && i < a.size(); ++i)
      mpz_addmul(acc.get_mpz_t(), a[i].get_mpz_t(), b[n - i].get_mpz_t());
    reduce(acc, m);
    out[n] = std::move(acc);
  }
}

void convolve_kronecker(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                        std::vector<mpz_class>& out, std::size_t len, const mpz_class& m) {
  out = kronecker_product(a, std::min(a.size(), len), b, std::min(b.size(), len), len, m);
}

std::vector<mpz_class> eval_horner(const std::vector<mpz_class>& poly, const std::vector<mpz_class>& points,
                                   const mpz_class& m) {
  std::vector<mpz_class> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    mpz_class r = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
      r = r * points[j] + *it;
      reduce(r, m);
    }
    out[j] = r;
  }
  return out;
}

std::vector<mpz_class> eval_horner_omp(const std::vector<mpz_class>& poly, const std::vector<mpz_class>& points,
                                       const mpz_class& m) {
  std::vector<mpz_class> out(points.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t j = 0; j < points.size(); ++j) {
    mpz_class r = 0, t;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
      mpz_mul(t.get_mpz_t(), r.get_mpz_t(), points[j].get_mpz_t());
      mpz_add(t.get_mpz_t(), t.get_mpz_t(), it->get_mpz_t());
      mpz_mod(r.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
    }
    out[j] = std::move(r);
  }
  return out;
}

// Bluestein: jk = C(j+k,2) - C(j,2) - C(k,2), so
//   P(w^k) = w^{-C(k,2)} sum_j [a_j w^{-C(j,2)}] w^{C(j+k,2)},
// a correlation that becomes one big convolution.
std::vector<mpz_class> eval_cyclic_dft(const std::vector<mpz_class>& poly, const mpz_class& omega, std::size_t L,
                                       const mpz_class& m) {
  if (L == 0) return {};
  std::vector<mpz_class> a(L, 0);
  for (std::size_t j = 0; j < poly.size(); ++j) a[j % L] += poly[j];
  for (auto& x : a) reduce(x, m);

  mpz_class winv;
  if (!mpz_invert(winv.get_mpz_t(), omega.get_mpz_t(), m.get_mpz_t()))
    throw ArithmeticError("root of unity is not invertible");

  // inverse chirp w^{-C(j,2)}, j < L
  std::vector<mpz_class> ichirp(L);
  {
    mpz_class c = 1, step = 1;
    for (std::size_t j = 0; j < L; ++j) {
      ichirp[j] = c;
      c *= step;
      reduce(c, m);
      step *= winv;
      reduce(step, m);
    }
  }
  // reversed u: ur[i] = a[L-1-i] * ichirp[L-1-i]
  std::vector<mpz_class> ur(L);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < L; ++i) {
    const std::size_t j = L - 1 - i;
    mpz_mul(ur[i].get_mpz_t(), a[j].get_mpz_t(), ichirp[j].get_mpz_t());
    mpz_mod(ur[i].get_mpz_t(), ur[i].get_mpz_t(), m.get_mpz_t());
  }
  std::vector<mpz_class>().swap(a);

  // chirp w^{C(t,2)}, t < 2L-1
  const std::size_t nv = 2 * L - 1;
  std::vector<mpz_class> v(nv);
  {
    mpz_class c = 1, step = 1;
    for (std::size_t t = 0; t < nv; ++t) {
      v[t] = c;
      c *= step;
      reduce(c, m);
      step *= omega;
      reduce(step, m);
    }
  }

  auto prod = kronecker_product(ur, L, v, nv, L - 1 + L, m);
  std::vector<mpz_class>().swap(ur);
  std::vector<mpz_class>().swap(v);

  std::vector<mpz_class> out(L);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < L; ++k) {
    mpz_mul(out[k].get_mpz_t(), prod[L - 1 + k].get_mpz_t(), ichirp[k].get_mpz_t());
    mpz_mod(out[k].get_mpz_t(), out[k].get_mpz_t(), m.get_mpz_t());
  }
  return out;
}

}  // namespace cyfrob::kernels
