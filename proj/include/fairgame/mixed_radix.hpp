#pragma once

#include <cstdint>
#include <vector>

#include "fairgame/errors.hpp"

namespace fairgame {

// Big-endian mixed-radix codec: digit 0 is most significant. Used for joint
// action profiles (player 0 most significant), joint events (component 0 most
// significant) and pure-strategy tables (entry for event 0 most significant).
class MixedRadix {
 public:
  MixedRadix() = default;

  explicit MixedRadix(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    strides_.assign(sizes_.size(), 1);
    std::int64_t total = sizes_.empty() ? 0 : 1;
    for (int i = static_cast<int>(sizes_.size()) - 1; i >= 0; --i) {
      if (sizes_[i] <= 0) throw ValidationError("mixed radix size must be positive");
      strides_[i] = total;
      if (total > (int64_t{1} << 62) / sizes_[i])
        throw SizeCapError("mixed radix space overflows 64-bit index");
      total *= sizes_[i];
    }
    total_ = total;
  }

  std::int64_t size() const { return total_; }
  int num_digits() const { return static_cast<int>(sizes_.size()); }
  int digit_size(int pos) const { return sizes_[pos]; }
  std::int64_t stride(int pos) const { return strides_[pos]; }
  const std::vector<int>& sizes() const { return sizes_; }

  std::int64_t encode(const std::vector<int>& digits) const {
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) idx += digits[i] * strides_[i];
    return idx;
  }

  std::vector<int> decode(std::int64_t idx) const {
    std::vector<int> digits(sizes_.size());
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      digits[i] = static_cast<int>(idx / strides_[i]);
      idx %= strides_[i];
    }
    return digits;
  }

  int digit(std::int64_t idx, int pos) const {
    return static_cast<int>(idx / strides_[pos] % sizes_[pos]);
  }

  // Index with digit `pos` replaced by `value`; the workhorse behind
  // unilateral-deviation lookups u_i((b, a_{-i}), .).
  std::int64_t with_digit(std::int64_t idx, int pos, int value) const {
    return idx + (value - digit(idx, pos)) * strides_[pos];
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::int64_t> strides_;
  std::int64_t total_ = 0;
};

}  // namespace fairgame
