#include "cyfrob/operator.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace cyfrob {

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(strip(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

struct FieldReader {
  int line;
  int field;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line) + ", field " + std::to_string(field) + ": " + msg,
                     line, field);
  }

  mpz_class integer(std::string_view s) const {
    if (s.empty()) fail("empty integer");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) fail("bad integer '" + std::string(s) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(s[j]))) fail("bad integer '" + std::string(s) + "'");
    return mpz_class(std::string(s[0] == '+' ? s.substr(1) : s));
  }

  int small_int(std::string_view s) const {
    mpz_class v = integer(s);
    if (!v.fits_sint_p()) fail("integer out of range");
    return static_cast<int>(v.get_si());
  }

  mpq_class rational(std::string_view s) const {
    auto parts = split(s, '/');
    if (parts.size() == 1) return mpq_class(integer(parts[0]));
    if (parts.size() != 2) fail("bad rational '" + std::string(s) + "'");
    mpz_class den = integer(parts[1]);
    if (den == 0) fail("zero denominator");
    mpq_class q(integer(parts[0]), den);
    q.canonicalize();
    return q;
  }

  IntPoly poly(std::string_view s) const {
    if (s == "-") return {};
    IntPoly out;
    for (auto c : split(s, ',')) out.push_back(integer(c));
    trim(out);
    return out;
  }
};

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace

IntPoly CYOperator::Q(int k) const {
  IntPoly q;
  for (int i = 0; i <= order_b; ++i) q.push_back(coeffs[i][k]);
  trim(q);
  return q;
}

IntPoly CYOperator::S(int i) const {
  IntPoly s(coeffs[i].begin(), coeffs[i].end());
  trim(s);
  return s;
}

std::vector<int> default_denom_exponents(int b, std::size_t n_loci) {
  std::vector<int> e(n_loci, 0);
  if (n_loci > 1) e[1] = (b == 4) ? 2 : 1;
  return e;
}

int CYOperator::exponent_for(std::size_t locus_index) const {
  if (locus_index < denom_exponents.size()) return denom_exponents[locus_index];
  return default_denom_exponents(order_b, locus_index + 1)[locus_index];
}

IntPoly CYOperator::denominator() const {
  IntPoly d{1};
  std::vector<const IntPoly*> loci{&conifold_locus, &apparent_sing_locus};
  for (const auto& o : other_sing_loci) loci.push_back(&o);
  for (std::size_t j = 0; j < loci.size(); ++j) {
    if (degree(*loci[j]) < 0) continue;
    d = poly_mul(d, poly_pow(*loci[j], exponent_for(j)));
  }
  return d;
}

void normalize_operator(CYOperator& op) {
  const int b = op.order_b;
  for (int i = 0; i < b; ++i)
    if (op.coeffs[i][0] != 0)
      throw ValidationError("S_" + std::to_string(i) + "(0) != 0 violates MUM normalization");
  mpz_class s = op.coeffs[b][0];
  if (s == 0) throw ValidationError("S_" + std::to_string(b) + "(0) = 0 violates MUM normalization");
  if (s == 1) return;

  bool divisible = true;
  for (const auto& row : op.coeffs)
    for (const auto& c : row)
      if (!mpz_divisible_p(c.get_mpz_t(), s.get_mpz_t())) divisible = false;
  if (divisible) {
    for (auto& row : op.coeffs)
      for (auto& c : row) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
    return;
  }
  // phi = s * psi, then divide by s: coefficient k picks up s^(k-1)
  for (auto& row : op.coeffs) {
    for (int k = 0; k <= op.degree_N; ++k) {
      if (k == 0) {
        mpz_divexact(row[0].get_mpz_t(), row[0].get_mpz_t(), s.get_mpz_t());
      } else {
        mpz_class f;
        mpz_pow_ui(f.get_mpz_t(), s.get_mpz_t(), k - 1);
        row[k] *= f;
      }
    }
  }
  op.conifold_locus = scale_argument(op.conifold_locus, s);
  op.apparent_sing_locus = scale_argument(op.apparent_sing_locus, s);
  for (auto& o : op.other_sing_loci) o = scale_argument(o, s);
}

CYOperator parse_operator(std::string_view text, int line_no) {
  auto fields = split(text, '|');
  FieldReader rd{line_no, 0};
  if (fields.size() != 10 && fields.size() != 11)
    rd.fail("expected 10 or 11 '|'-separated fields, found " + std::to_string(fields.size()));

  CYOperator op;
  rd.field = 1;
  op.name = std::string(fields[0]);
  if (op.name.empty()) rd.fail("empty operator name");
  rd.field = 2;
  op.order_b = rd.small_int(fields[1]);
  rd.field = 3;
  op.degree_N = rd.small_int(fields[2]);

  rd.field = 4;
  auto rows = split(fields[3], ';');
  if (static_cast<int>(rows.size()) != op.order_b + 1)
    rd.fail("expected " + std::to_string(op.order_b + 1) + " coefficient rows");
  for (auto r : rows) {
    std::vector<mpz_class> row;
    for (auto c : split(r, ',')) row.push_back(rd.integer(c));
    if (static_cast<int>(row.size()) != op.degree_N + 1)
      rd.fail("each coefficient row needs N+1 = " + std::to_string(op.degree_N + 1) + " entries");
    op.coeffs.push_back(std::move(row));
  }

  rd.field = 5;
  op.trunc_const_C = rd.rational(fields[4]);
  rd.field = 6;
  if (fields[5] != "-") op.rational_K = rd.rational(fields[5]);
  rd.field = 7;
  op.conifold_locus = rd.poly(fields[6]);
  rd.field = 8;
  op.apparent_sing_locus = rd.poly(fields[7]);
  rd.field = 9;
  if (fields[8] != "-")
    for (auto o : split(fields[8], ';')) op.other_sing_loci.push_back(rd.poly(o));
  rd.field = 10;
  const std::size_t n_loci = 2 + op.other_sing_loci.size();
  if (fields[9] == "-") {
    op.denom_exponents = default_denom_exponents(op.order_b, n_loci);
  } else {
    for (auto e : split(fields[9], ',')) {
      int v = rd.small_int(e);
      if (v < 0) rd.fail("negative denominator exponent");
      op.denom_exponents.push_back(v);
    }
    if (op.denom_exponents.size() > n_loci) rd.fail("more exponents than loci");
    auto def = default_denom_exponents(op.order_b, n_loci);
    for (std::size_t j = op.denom_exponents.size(); j < n_loci; ++j) op.denom_exponents.push_back(def[j]);
  }
  if (fields.size() == 11) {
    rd.field = 11;
    op.alpha1 = rd.rational(fields[10]);
  }

  if (op.order_b != 3 && op.order_b != 4)
    throw ValidationError("order b = " + std::to_string(op.order_b) + " is not supported (3 or 4)");
  normalize_operator(op);
  if (op.degree_N < 1) throw ValidationError("degree N must be at least 1");
  bool top = false;
  for (int i = 0; i <= op.order_b; ++i) top = top || op.coeffs[i][op.degree_N] != 0;
  if (!top) throw ValidationError("degree N exceeds the degree of every S_i");
  if (op.trunc_const_C <= 0) throw ValidationError("C must be positive");
  if ((op.order_b == 4) != op.rational_K.has_value())
    throw ValidationError("K must be given exactly when b = 4");
  if (op.order_b == 4 && op.alpha1 != 0) throw ValidationError("alpha_1 override is only meaningful for b = 3");
  return op;
}

std::string serialize_operator(const CYOperator& op) {
  std::ostringstream os;
  os << op.name << " | " << op.order_b << " | " << op.degree_N << " | ";
  for (int i = 0; i <= op.order_b; ++i) {
    if (i) os << " ; ";
    for (int k = 0; k <= op.degree_N; ++k) os << (k ? "," : "") << op.coeffs[i][k];
  }
  os << " | " << rational_to_string(op.trunc_const_C) << " | "
     << (op.rational_K ? rational_to_string(*op.rational_K) : "-") << " | " << poly_to_string(op.conifold_locus)
     << " | " << poly_to_string(op.apparent_sing_locus) << " | ";
  if (op.other_sing_loci.empty()) {
    os << "-";
  } else {
    for (std::size_t j = 0; j < op.other_sing_loci.size(); ++j)
      os << (j ? " ; " : "") << poly_to_string(op.other_sing_loci[j]);
  }
  os << " | ";
  for (std::size_t j = 0; j < op.denom_exponents.size(); ++j) os << (j ? "," : "") << op.denom_exponents[j];
  if (op.alpha1 != 0) os << " | " << rational_to_string(op.alpha1);
  return os.str();
}

std::vector<CYOperator> load_operator_db(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open operator database '" + path + "'");
  std::vector<CYOperator> db;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    db.push_back(parse_operator(s, no));
  }
  return db;
}

const CYOperator& find_operator(const std::vector<CYOperator>& db, std::string_view name) {
  for (const auto& op : db)
    if (op.name == name) return op;
  throw UsageError("unknown operator '" + std::string(name) + "'");
}

RecurrenceTable derive_recurrence(const CYOperator& op) {
  RecurrenceTable t;
  t.b = op.order_b;
  t.N = op.degree_N;
  t.leading = op.Q(0);
  t.shifted.assign(t.b, {});
  for (int r = 0; r < t.b; ++r)
    for (int k = 1; k <= t.N; ++k)
      t.shifted[r].push_back(poly_scale(taylor_shift(divided_derivative(op.Q(k), r), -k), -1));
  t.same_n.assign(t.b, {});
  for (int r = 1; r < t.b; ++r) t.same_n[r] = poly_scale(divided_derivative(t.leading, r), -1);
  return t;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace cyfrob
