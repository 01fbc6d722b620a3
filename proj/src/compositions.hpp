#pragma once

#include <functional>
#include <vector>

#include <gmpxx.h>

namespace ka {

// All s in N^m with sum_k k*s_k = l (k = 1..m), in descending lexicographic
// order of (s_1, ..., s_m). s[k-1] holds s_k.
std::vector<std::vector<int>> weighted_compositions(int l, int m);
void for_each_weighted_composition(int l, int m, const std::function<void(const std::vector<int>&)>& fn);

// |s|! / prod_k s_k!
mpz_class multinomial(const std::vector<int>& s);
mpz_class multinomial(int total, const std::vector<int>& parts);

}  // namespace ka
