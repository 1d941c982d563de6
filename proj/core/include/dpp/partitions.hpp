#pragma once

#include <string>
#include <vector>

namespace dpp {

// Weakly decreasing positive parts; trailing zeros are never stored.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  static const Partition& empty();

  int length() const { return static_cast<int>(parts_.size()); }
  int size() const;  // |lambda|
  int part(int i) const { return (i >= 0 && i < length()) ? parts_[i] : 0; }  // 0-based, 0 beyond length
  const std::vector<int>& parts() const { return parts_; }

  Partition conjugate() const;
  bool contains(const Partition& mu) const;  // diagram containment
  // Shifted coordinate l_i = lambda_i - i for 1-based i, valid for any i >= 1.
  long shifted(int i) const { return static_cast<long>(part(i - 1)) - i; }
  // All columns of even height, i.e. parts pair up.
  bool conjugate_even() const;

  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }
  friend bool operator<(const Partition& a, const Partition& b);

  std::string to_string() const;

 private:
  std::vector<int> parts_;
};

// All partitions of total size <= max_size, ordered by size then lexicographically.
std::vector<Partition> partitions_up_to(int max_size);

// All partitions contained in the diagram of lambda (including empty and lambda).
std::vector<Partition> subdiagrams(const Partition& lambda);

// Containment chain lambda >= mu (horizontal position-wise), used by
// interlacing checks.
bool diagram_contains(const Partition& lambda, const Partition& mu);

}  // namespace dpp
