#include "compositions.hpp"

#include "error.hpp"

namespace ka {

namespace {

void rec(int k, int m, int remaining, std::vector<int>& s,
         const std::function<void(const std::vector<int>&)>& fn) {
  if (k == m) {
    if (remaining % m != 0) return;
    s[m - 1] = remaining / m;
    fn(s);
    s[m - 1] = 0;
    return;
  }
  for (int c = remaining / k; c >= 0; --c) {
    s[k - 1] = c;
    rec(k + 1, m, remaining - c * k, s, fn);
  }
  s[k - 1] = 0;
}

}  // namespace

void for_each_weighted_composition(int l, int m, const std::function<void(const std::vector<int>&)>& fn) {
  require(l >= 0 && m >= 1, ErrorCode::invalid_argument, "weighted compositions need l >= 0, m >= 1");
  std::vector<int> s(m, 0);
  rec(1, m, l, s, fn);
}

std::vector<std::vector<int>> weighted_compositions(int l, int m) {
  std::vector<std::vector<int>> out;
  for_each_weighted_composition(l, m, [&](const std::vector<int>& s) { out.push_back(s); });
  return out;
}

mpz_class multinomial(int total, const std::vector<int>& parts) {
  long sum = 0;
  for (int v : parts) sum += v;
  require(sum == total, ErrorCode::invalid_argument, "multinomial parts do not sum to the total");
  return multinomial(parts);
}

mpz_class multinomial(const std::vector<int>& s) {
  unsigned long n = 0;
  for (int v : s) {
    require(v >= 0, ErrorCode::invalid_argument, "negative multinomial part");
    n += static_cast<unsigned long>(v);
  }
  mpz_class num;
  mpz_fac_ui(num.get_mpz_t(), n);
  for (int v : s) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(v));
    num /= f;
  }
  return num;
}

}  // namespace ka
