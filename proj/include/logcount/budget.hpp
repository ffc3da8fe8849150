// Copyright 2026 The logcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

namespace logcount {

// Running tally of polynomial-multiplication work in units of M(t), the cost
// of one full degree-t multiplication, normalized so that M(2t) = 2 M(t) and
// M(1) = 1.
//
// The series engine multiplies length-t blocks with three real transforms of
// length 2t, so one transform of length s is charged s/6 units. Cached or
// reused spectra are simply not re-charged; linear-time passes (recurrences,
// term-by-term integration, pointwise products) are not counted.
class MulBudget {
 public:
  void add_transform(std::size_t fft_size) { units_ += static_cast<double>(fft_size) / 6.0; }

  // One schoolbook multiplication of size n, charged at its M(n) equivalent.
  void add_product(std::size_t n) { units_ += static_cast<double>(n); }

  // Total in size-1 multiplication equivalents.
  double units() const { return units_; }

  // Total expressed as a multiple of M(n).
  double in_units_of(std::size_t n) const { return units_ / static_cast<double>(n); }

  void reset() { units_ = 0.0; }

 private:
  double units_ = 0.0;
};

}  // namespace logcount
