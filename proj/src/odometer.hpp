#pragma once

#include <cstddef>
#include <vector>

namespace womc::detail {

// Advances a mixed-radix counter, last digit fastest. False after the last value.
inline bool next_combination(std::vector<std::size_t>& digit, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digit.size(); i-- > 0;) {
    if (++digit[i] < radix[i]) return true;
    digit[i] = 0;
  }
  return false;
}

}  // namespace womc::detail
