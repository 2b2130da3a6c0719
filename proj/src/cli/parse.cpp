#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

#include "nsc/cli.hpp"
#include "nsc/common.hpp"

namespace nsc::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_plain(std::string_view s, std::string_view whole) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && ptr == s.data() + s.size() && !s.empty(),
          "cannot parse number '" + std::string(whole) + "'");
  return v;
}

struct Power {
  double base;
  double exponent;
};

std::optional<Power> as_power(std::string_view s) {
  s = trim(s);
  const auto caret = s.find('^');
  if (caret == std::string_view::npos) return std::nullopt;
  return Power{parse_plain(s.substr(0, caret), s), parse_plain(s.substr(caret + 1), s)};
}

}  // namespace

double parse_number(std::string_view text) {
  const std::string_view s = trim(text);
  require(!s.empty(), "empty number");
  if (const auto p = as_power(s)) {
    require(p->base > 0.0, "power base must be positive in '" + std::string(s) + "'");
    return std::pow(p->base, p->exponent);
  }
  const auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    const double num = parse_plain(s.substr(0, slash), s);
    const double den = parse_plain(s.substr(slash + 1), s);
    require(den != 0.0, "zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  return parse_plain(s, s);
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string_view item =
        trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    require(!item.empty(), "empty entry in list '" + std::string(text) + "'");
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_number(item));
    } else {
      const auto lo_text = item.substr(0, dots), hi_text = item.substr(dots + 2);
      const auto pa = as_power(lo_text), pb = as_power(hi_text);
      if (pa && pb && pa->base == pb->base) {
        const double e0 = pa->exponent, e1 = pb->exponent;
        const double step = e1 >= e0 ? 1.0 : -1.0;
        require(std::floor(e0) == e0 && std::floor(e1) == e1,
                "range exponents must be integers in '" + std::string(item) + "'");
        for (double e = e0; step > 0 ? e <= e1 : e >= e1; e += step)
          out.push_back(std::pow(pa->base, e));
      } else {
        const double a = parse_number(lo_text), b = parse_number(hi_text);
        require(a > 0.0 && b > 0.0, "range endpoints must be positive in '" + std::string(item) + "'");
        const double k = std::log2(b / a);
        require(std::abs(k - std::round(k)) < 1e-9,
                "range endpoints must differ by a power of two in '" + std::string(item) + "'");
        const int n = static_cast<int>(std::round(k));
        for (int i = 0; i <= std::abs(n); ++i) out.push_back(std::ldexp(a, n >= 0 ? i : -i));
      }
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  require(ctx != nullptr, "sha256: cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  require(ok, "sha256: digest failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace nsc::cli
