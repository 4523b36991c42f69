#include "collatz/maps.hpp"

#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "collatz/error.hpp"

namespace collatz {

namespace {

void require_positive(const Natural& n, const char* op) {
  if (n.is_zero()) throw DomainError(std::string(op) + ": domain is the positive integers, got 0");
}

std::int64_t floor_mod(__int128 v, std::int64_t d) {
  auto r = static_cast<std::int64_t>(v % d);
  return r < 0 ? r + d : r;
}

}  // namespace

Natural collatz_step(const Natural& n) {
  require_positive(n, "collatz_step");
  Natural x = n;
  if (x.is_odd()) {
    x *= 3;
    x += 1;
  } else {
    x.halve();
  }
  return x;
}

Natural t_step(const Natural& n) {
  require_positive(n, "t_step");
  Natural x = n;
  if (x.is_odd()) {
    x *= 3;
    x += 1;
  }
  x.halve();
  return x;
}

Natural collatz_permutation_u(const Natural& n) {
  require_positive(n, "collatz_permutation_u");
  const std::uint64_t r = n.mod_small(4);
  if (r % 2 == 0) return n.shifted_right(1) * 3;
  Natural x = n.shifted_right(2) * 3;
  x += (r == 1) ? 1 : 2;
  return x;
}

Natural MapValue::natural() const {
  if (!value_) throw DomainError("map value is undefined");
  return Natural::from_mpz(*value_);
}

const mpz_class& MapValue::integer() const {
  if (!value_) throw DomainError("map value is undefined");
  return *value_;
}

MapValue GeneralizedCollatzMap::apply(const Natural& x) const {
  const auto i = static_cast<std::size_t>(x.mod_small(static_cast<std::uint64_t>(d_)));
  const CoefficientPair& p = pairs_[i];
  mpz_class num = x.mpz();
  num *= static_cast<long>(p.a);
  num += static_cast<long>(p.b);
  if (mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(d_)) == 0) {
    return MapValue::undefined();
  }
  mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(d_));
  return MapValue::defined(std::move(num));
}

std::string GeneralizedCollatzMap::spec_string() const {
  std::ostringstream os;
  os << "d=" << d_ << ";pairs=";
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (i) os << ',';
    os << '(' << pairs_[i].a << ',' << pairs_[i].b << ')';
  }
  os << ";partial=" << (partial_ ? "true" : "false");
  return os.str();
}

GeneralizedCollatzMap make_general_map(std::int64_t d, std::vector<CoefficientPair> pairs,
                                       bool allow_partial, std::string name) {
  if (d < 2) throw DomainError("modulus d must be at least 2, got " + std::to_string(d));
  if (pairs.size() != static_cast<std::size_t>(d)) {
    throw DomainError("expected " + std::to_string(d) + " coefficient pairs, got " +
                      std::to_string(pairs.size()));
  }
  GeneralizedCollatzMap m;
  m.d_ = d;
  bool coprime = true;
  for (std::int64_t i = 0; i < d; ++i) {
    const CoefficientPair& p = pairs[static_cast<std::size_t>(i)];
    if (floor_mod(static_cast<__int128>(i) * p.a + p.b, d) != 0) m.inadmissible_.push_back(i);
    if (std::gcd(p.a, d) != 1) coprime = false;
  }
  if (!m.inadmissible_.empty() && !allow_partial) {
    const std::int64_t i = m.inadmissible_.front();
    const CoefficientPair& p = pairs[static_cast<std::size_t>(i)];
    throw DomainError("map is not admissible at residue " + std::to_string(i) + ": " +
                      std::to_string(i) + "*" + std::to_string(p.a) + "+" + std::to_string(p.b) +
                      " is not divisible by " + std::to_string(d));
  }
  m.partial_ = !m.inadmissible_.empty();
  m.relatively_prime_ = coprime;
  m.pairs_ = std::move(pairs);
  m.name_ = name.empty() ? m.spec_string() : std::move(name);
  return m;
}

GeneralizedCollatzMap make_3k_map(std::int64_t k) {
  if (k < 1 || (k % 6 != 1 && k % 6 != 5)) {
    throw DomainError("the 3x+k function needs k >= 1 with k = 1 or 5 (mod 6), got " +
                      std::to_string(k));
  }
  return make_general_map(2, {{1, 0}, {3, k}}, false, "3x+" + std::to_string(k));
}

GeneralizedCollatzMap t_map() { return make_3k_map(1); }

GeneralizedCollatzMap collatz_map() { return make_general_map(2, {{1, 0}, {6, 2}}, false, "collatz"); }

GeneralizedCollatzMap five_x_plus_one_map() {
  return make_general_map(2, {{1, 0}, {5, 1}}, false, "5x+1");
}

GeneralizedCollatzMap permutation_u_map() {
  return make_general_map(4, {{6, 0}, {3, 1}, {6, 0}, {3, -1}}, false, "U");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DomainError("map spec: bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

std::vector<CoefficientPair> parse_pairs(std::string_view s) {
  std::vector<CoefficientPair> out;
  s = trim(s);
  while (!s.empty()) {
    if (s.front() != '(') throw DomainError("map spec: expected '(' in pairs list");
    const auto close = s.find(')');
    if (close == std::string_view::npos) throw DomainError("map spec: unterminated pair");
    const std::string_view inner = s.substr(1, close - 1);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw DomainError("map spec: pair needs two integers");
    out.push_back({parse_int(inner.substr(0, comma), "a"), parse_int(inner.substr(comma + 1), "b")});
    s = trim(s.substr(close + 1));
    if (!s.empty()) {
      if (s.front() != ',') throw DomainError("map spec: expected ',' between pairs");
      s = trim(s.substr(1));
    }
  }
  return out;
}

}  // namespace

GeneralizedCollatzMap parse_map_spec(std::string_view text) {
  text = trim(text);
  if (text == "3x+1" || text == "T") return t_map();
  if (text == "collatz" || text == "C") return collatz_map();
  if (text == "5x+1") return five_x_plus_one_map();
  if (text == "U") return permutation_u_map();
  if (text.starts_with("3x+")) return make_3k_map(parse_int(text.substr(3), "k"));

  std::optional<std::int64_t> d;
  std::optional<std::vector<CoefficientPair>> pairs;
  bool partial = false;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const std::string_view field = trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw DomainError("map spec: expected key=value, got '" + std::string(field) + "'");
    const std::string_view key = trim(field.substr(0, eq));
    const std::string_view value = trim(field.substr(eq + 1));
    if (key == "d") {
      d = parse_int(value, "d");
    } else if (key == "pairs") {
      pairs = parse_pairs(value);
    } else if (key == "partial") {
      if (value == "true") partial = true;
      else if (value == "false") partial = false;
      else throw DomainError("map spec: partial must be true or false");
    } else {
      throw DomainError("map spec: unknown key '" + std::string(key) + "'");
    }
  }
  if (!d || !pairs) throw DomainError("map spec needs both d= and pairs=, or a known shorthand");
  return make_general_map(*d, std::move(*pairs), partial);
}

}  // namespace collatz
