#include "sovlat/laurent.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>
#include <unordered_map>

namespace sovlat {

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t words[kMaxGenerators / 8];
  std::memcpy(words, m.e.data(), sizeof(words));
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t w : words) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

LaurentPoly::LaurentPoly(const Rational& c) {
  if (sgn(c) != 0) t_.push_back({Monomial{}, c});
}

LaurentPoly::LaurentPoly(Monomial m, const Rational& c) {
  if (sgn(c) != 0) t_.push_back({m, c});
}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
  LaurentPoly out;
  for (auto& t : terms) {
    if (!out.t_.empty() && out.t_.back().mono == t.mono) {
      out.t_.back().coeff += t.coeff;
    } else {
      if (!out.t_.empty() && sgn(out.t_.back().coeff) == 0) out.t_.pop_back();
      out.t_.push_back(std::move(t));
    }
  }
  if (!out.t_.empty() && sgn(out.t_.back().coeff) == 0) out.t_.pop_back();
  return out;
}

Rational LaurentPoly::constant_term() const {
  for (const auto& t : t_)
    if (t.mono.is_one()) return t.coeff;
  return Rational(0);
}

bool LaurentPoly::is_homogeneous(int count, int& degree) const {
  if (t_.empty()) {
    degree = 0;
    return true;
  }
  degree = t_.front().mono.total_degree(count);
  for (const auto& t : t_)
    if (t.mono.total_degree(count) != degree) return false;
  return true;
}

LaurentPoly LaurentPoly::derivative(int index) const {
  std::vector<Term> out;
  for (const auto& t : t_) {
    int p = t.mono.e[index];
    if (p == 0) continue;
    Term d = t;
    d.coeff *= p;
    d.mono.e[index] = static_cast<std::int8_t>(p - 1);
    out.push_back(std::move(d));
  }
  return from_terms(std::move(out));
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (sgn(c) == 0) return {};
  LaurentPoly out = *this;
  for (auto& t : out.t_) t.coeff *= c;
  return out;
}

LaurentPoly LaurentPoly::times_monomial(const Monomial& m) const {
  LaurentPoly out = *this;
  for (auto& t : out.t_) t.mono = t.mono * m;
  return out;
}

std::string LaurentPoly::str(const std::vector<std::string>& names) const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : t_) {
    Rational c = t.coeff;
    bool neg = sgn(c) < 0;
    if (neg) c = -c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    bool unit = (c == 1);
    if (!unit || t.mono.is_one()) os << c.get_str();
    bool need_star = !unit;
    for (int i = 0; i < kMaxGenerators; ++i) {
      int p = t.mono.e[i];
      if (p == 0) continue;
      if (need_star) os << "*";
      need_star = true;
      os << (i < static_cast<int>(names.size()) ? names[i] : "x" + std::to_string(i));
      if (p != 1) os << "^" << (p < 0 ? "(" + std::to_string(p) + ")" : std::to_string(p));
    }
  }
  return os.str();
}

namespace {

std::vector<LaurentPoly::Term> merge(const std::vector<LaurentPoly::Term>& a,
                                     const std::vector<LaurentPoly::Term>& b, bool subtract) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono < b[j].mono)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].mono < a[i].mono) {
      out.push_back(b[j++]);
      if (subtract) out.back().coeff = -out.back().coeff;
    } else {
      Rational c = subtract ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
      if (sgn(c) != 0) out.push_back({a[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.t_.empty()) return *this;
  t_ = merge(t_, o.t_, false);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (o.t_.empty()) return *this;
  t_ = merge(t_, o.t_, true);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.t_.empty() || b.t_.empty()) return {};
  if (a.t_.size() == 1 || b.t_.size() == 1) {
    const LaurentPoly& single = a.t_.size() == 1 ? a : b;
    const LaurentPoly& other = a.t_.size() == 1 ? b : a;
    LaurentPoly out = other;
    const auto& s = single.t_[0];
    for (auto& t : out.t_) {
      t.mono = t.mono * s.mono;
      t.coeff *= s.coeff;
    }
    // Multiplying by a monomial preserves the ordering.
    return out;
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(a.t_.size() * b.t_.size());
  for (const auto& x : a.t_)
    for (const auto& y : b.t_) {
      Monomial m = x.mono * y.mono;
      auto [it, inserted] = acc.try_emplace(m);
      if (inserted)
        it->second = x.coeff * y.coeff;
      else
        it->second += x.coeff * y.coeff;
    }
  LaurentPoly out;
  out.t_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (sgn(c) != 0) out.t_.push_back({m, std::move(c)});
  std::sort(out.t_.begin(), out.t_.end(),
            [](const LaurentPoly::Term& x, const LaurentPoly::Term& y) { return x.mono < y.mono; });
  return out;
}

EvalPlan::EvalPlan(const LaurentPoly& p) {
  for (const auto& t : p.terms()) {
    CompiledTerm ct{t.coeff.get_d(), {}};
    for (int i = 0; i < kMaxGenerators; ++i)
      if (t.mono.e[i] != 0) ct.factors.push_back({i, t.mono.e[i]});
    terms_.push_back(std::move(ct));
  }
}

}  // namespace sovlat
