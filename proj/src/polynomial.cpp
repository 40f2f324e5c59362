#include "mrt/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace mrt {

Polynomial Polynomial::constant(int n, cplx c) {
  Polynomial p(n);
  std::vector<int> e(static_cast<size_t>(n), 0);
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::variable(int n, int axis, int power) {
  Polynomial p(n);
  std::vector<int> e(static_cast<size_t>(n), 0);
  e[static_cast<size_t>(axis)] = power;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::monomial(int n, std::span<const int> expo, cplx c) {
  Polynomial p(n);
  p.add_term(expo, c);
  return p;
}

Polynomial Polynomial::linear(std::span<const cplx> a, cplx c0) {
  const int n = static_cast<int>(a.size());
  Polynomial p = Polynomial::constant(n, c0);
  for (int j = 0; j < n; ++j) p += Polynomial::variable(n, j) * a[static_cast<size_t>(j)];
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int a : e) s += a;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(std::span<const int> expo, cplx c) {
  if (static_cast<int>(expo.size()) != n_) throw validation_error("polynomial: exponent length mismatch");
  if (c == cplx(0.0)) return;
  std::vector<int> key(expo.begin(), expo.end());
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (n_ != o.n_) throw validation_error("polynomial: dim mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (n_ != o.n_) throw validation_error("polynomial: dim mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
  if (s == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.n_ != b.n_) throw validation_error("polynomial: dim mismatch");
  Polynomial out(a.n_);
  std::vector<int> e(static_cast<size_t>(a.n_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial out(n_);
  std::vector<int> e(static_cast<size_t>(n_));
  for (const auto& [expo, c] : terms_) {
    const int k = expo[static_cast<size_t>(axis)];
    if (k == 0) continue;
    e.assign(expo.begin(), expo.end());
    e[static_cast<size_t>(axis)] -= 1;
    out.add_term(e, c * static_cast<double>(k));
  }
  return out;
}

cplx Polynomial::eval(std::span<const double> x) const {
  std::vector<cplx> xc(x.begin(), x.end());
  return eval(std::span<const cplx>(xc));
}

cplx Polynomial::eval(std::span<const cplx> x) const {
  if (static_cast<int>(x.size()) != n_) throw validation_error("polynomial eval: dim mismatch");
  cplx s = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx t = c;
    for (int a = 0; a < n_; ++a) {
      for (int k = 0; k < e[static_cast<size_t>(a)]; ++k) t *= x[static_cast<size_t>(a)];
    }
    s += t;
  }
  return s;
}

bool Polynomial::same_terms(const Polynomial& o, double tol) const {
  if (n_ != o.n_) return false;
  Polynomial d = *this;
  d -= o;
  if (tol == 0.0) return d.terms_.empty();
  for (const auto& [e, c] : d.terms_) {
    if (std::abs(c) > tol) return false;
  }
  return true;
}

namespace {

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_coeff(cplx c) {
  if (c.imag() == 0.0) return format_real(c.real());
  std::ostringstream os;
  os << "(" << format_real(c.real());
  os << (c.imag() < 0 ? "-" : "+") << format_real(std::abs(c.imag())) << "i)";
  return os.str();
}

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
};

double parse_number(Cursor& cur) {
  cur.skip_ws();
  size_t start = cur.i;
  if (cur.i < cur.s.size() && (cur.s[cur.i] == '+' || cur.s[cur.i] == '-')) ++cur.i;
  bool any = false;
  while (cur.i < cur.s.size() &&
         (std::isdigit(static_cast<unsigned char>(cur.s[cur.i])) || cur.s[cur.i] == '.')) {
    ++cur.i;
    any = true;
  }
  if (cur.i < cur.s.size() && (cur.s[cur.i] == 'e' || cur.s[cur.i] == 'E')) {
    size_t save = cur.i;
    ++cur.i;
    if (cur.i < cur.s.size() && (cur.s[cur.i] == '+' || cur.s[cur.i] == '-')) ++cur.i;
    if (cur.i < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.i]))) {
      while (cur.i < cur.s.size() && std::isdigit(static_cast<unsigned char>(cur.s[cur.i]))) ++cur.i;
    } else {
      cur.i = save;
    }
  }
  if (!any) throw validation_error("polynomial parse: number expected at position " + std::to_string(start));
  double v = std::stod(cur.s.substr(start, cur.i - start));
  cur.skip_ws();
  if (cur.i < cur.s.size() && cur.s[cur.i] == '/') {
    ++cur.i;
    Cursor denom_cur{cur.s, cur.i};
    double den = parse_number(denom_cur);
    cur.i = denom_cur.i;
    v /= den;
  }
  return v;
}

cplx parse_coeff(Cursor& cur) {
  if (cur.accept('(')) {
    double re = parse_number(cur);
    double im = 0.0;
    cur.skip_ws();
    if (cur.peek() == '+' || cur.peek() == '-') {
      im = parse_number(cur);
      if (!cur.accept('i')) throw validation_error("polynomial parse: expected 'i' in complex coefficient");
    } else if (cur.accept('i')) {
      im = re;
      re = 0.0;
    }
    if (!cur.accept(')')) throw validation_error("polynomial parse: expected ')'");
    return cplx(re, im);
  }
  return cplx(parse_number(cur), 0.0);
}

}  // namespace

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_coeff(c);
    for (int a = 0; a < n_; ++a) {
      if (e[static_cast<size_t>(a)] == 0) continue;
      os << "*x" << (a + 1);
      if (e[static_cast<size_t>(a)] > 1) os << "^" << e[static_cast<size_t>(a)];
    }
  }
  return os.str();
}

Polynomial Polynomial::parse(const std::string& text, int n) {
  Polynomial out(n);
  Cursor cur{text, 0};
  if (cur.eof()) return out;
  bool negate = cur.accept('-');
  if (!negate) cur.accept('+');
  while (true) {
    // absorb any further leading signs of this term
    while (true) {
      if (cur.accept('-')) {
        negate = !negate;
      } else if (!cur.accept('+')) {
        break;
      }
    }
    cplx coeff(1.0, 0.0);
    bool have_coeff = false;
    cur.skip_ws();
    char c0 = cur.peek();
    if (c0 == '(' || std::isdigit(static_cast<unsigned char>(c0)) || c0 == '.') {
      coeff = parse_coeff(cur);
      have_coeff = true;
    }
    std::vector<int> expo(static_cast<size_t>(n), 0);
    bool have_var = false;
    while (true) {
      size_t save = cur.i;
      if (have_var || have_coeff) {
        if (!cur.accept('*')) break;
      }
      cur.skip_ws();
      if (cur.peek() != 'x') {
        cur.i = save;
        break;
      }
      ++cur.i;
      Cursor num{cur.s, cur.i};
      const int axis = static_cast<int>(parse_number(num));
      cur.i = num.i;
      if (axis < 1 || axis > n) throw validation_error("polynomial parse: variable index out of range");
      int power = 1;
      if (cur.accept('^')) {
        Cursor pnum{cur.s, cur.i};
        power = static_cast<int>(parse_number(pnum));
        cur.i = pnum.i;
      }
      expo[static_cast<size_t>(axis - 1)] += power;
      have_var = true;
    }
    if (!have_coeff && !have_var) throw validation_error("polynomial parse: empty term");
    out.add_term(expo, negate ? -coeff : coeff);
    if (cur.eof()) break;
    if (cur.accept('+')) {
      negate = false;
    } else if (cur.accept('-')) {
      negate = true;
    } else {
      throw validation_error("polynomial parse: expected '+' or '-' between terms");
    }
  }
  return out;
}

}  // namespace mrt
