/**
 * Copyright 2026, The diffscope Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#include "exact_sum.hpp"

#include <cmath>

#include "diffscope/error.hpp"

namespace diffscope::detail {

namespace {
constexpr int kOffset = 1200;
}

ExactSum::ExactSum() { mpz_init(value_); }
ExactSum::~ExactSum() { mpz_clear(value_); }
ExactSum::ExactSum(const ExactSum& other) { mpz_init_set(value_, other.value_); }

ExactSum& ExactSum::operator=(const ExactSum& other) {
  if (this != &other) mpz_set(value_, other.value_);
  return *this;
}

void ExactSum::add(double x, std::uint64_t times) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteEvaluation, "exact sum of a non-finite value");
  if (x == 0.0 || times == 0) return;
  int e = 0;
  const double f = std::frexp(x, &e);  // x = f * 2^e, 0.5 <= |f| < 1
  const auto mant = static_cast<std::int64_t>(std::ldexp(f, 53));
  mpz_t term;
  mpz_init(term);
  mpz_set_si(term, mant);
  mpz_mul_2exp(term, term, static_cast<mp_bitcnt_t>(e - 53 + kOffset));
  if (times != 1) {
    mpz_t k;
    mpz_init(k);
    mpz_import(k, 1, -1, sizeof times, 0, 0, &times);
    mpz_mul(term, term, k);
    mpz_clear(k);
  }
  mpz_add(value_, value_, term);
  mpz_clear(term);
}

void ExactSum::subtract(const ExactSum& other) { mpz_sub(value_, value_, other.value_); }

bool ExactSum::is_zero() const { return mpz_sgn(value_) == 0; }

double ExactSum::to_double() const {
  long exp = 0;
  const double d = mpz_get_d_2exp(&exp, value_);
  return std::ldexp(d, static_cast<int>(exp - kOffset));
}

}  // namespace diffscope::detail
