#include "dpp/partitions.hpp"

#include <algorithm>
#include <stdexcept>

namespace dpp {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
  }
}

const Partition& Partition::empty() {
  static const Partition e;
  return e;
}

int Partition::size() const {
  int s = 0;
  for (int p : parts_) s += p;
  return s;
}

Partition Partition::conjugate() const {
  if (parts_.empty()) return Partition();
  std::vector<int> conj(parts_[0], 0);
  for (int p : parts_)
    for (int c = 0; c < p; ++c) ++conj[c];
  return Partition(std::move(conj));
}

bool Partition::contains(const Partition& mu) const { return diagram_contains(*this, mu); }

bool Partition::conjugate_even() const {
  for (int i = 0; i < length(); i += 2) {
    if (part(i) != part(i + 1)) return false;
  }
  return true;
}

bool operator<(const Partition& a, const Partition& b) {
  const int sa = a.size(), sb = b.size();
  if (sa != sb) return sa < sb;
  return a.parts_ < b.parts_;
}

std::string Partition::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(parts_[i]);
  }
  return out + ")";
}

bool diagram_contains(const Partition& lambda, const Partition& mu) {
  for (int i = 0; i < mu.length(); ++i) {
    if (mu.part(i) > lambda.part(i)) return false;
  }
  return true;
}

namespace {

void extend_partitions(std::vector<int>& cur, int remaining, int max_part, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    extend_partitions(cur, remaining - p, p, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> partitions_up_to(int max_size) {
  if (max_size < 0) throw std::invalid_argument("partitions_up_to: negative size");
  std::vector<Partition> out;
  for (int s = 0; s <= max_size; ++s) {
    std::vector<Partition> of_size;
    std::vector<int> cur;
    extend_partitions(cur, s, s, of_size);
    std::sort(of_size.begin(), of_size.end());
    out.insert(out.end(), of_size.begin(), of_size.end());
  }
  return out;
}

namespace {

void extend_subdiagrams(const Partition& lambda, int row, int cap, std::vector<int>& cur, std::vector<Partition>& out) {
  if (row == lambda.length()) {
    out.emplace_back(cur);
    return;
  }
  const int top = std::min(cap, lambda.part(row));
  for (int p = 0; p <= top; ++p) {
    if (p == 0) {
      out.emplace_back(cur);  // all further rows zero
      continue;
    }
    cur.push_back(p);
    extend_subdiagrams(lambda, row + 1, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Partition> subdiagrams(const Partition& lambda) {
  std::vector<Partition> out;
  std::vector<int> cur;
  extend_subdiagrams(lambda, 0, lambda.length() == 0 ? 0 : lambda.part(0), cur, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dpp
