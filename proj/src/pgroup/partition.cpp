#include "coklab/partition.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>

#include "coklab/errors.hpp"

namespace coklab {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw InvalidArgument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw InvalidArgument("partition parts must be weakly decreasing");
  }
}

Partition Partition::from_unsorted(std::vector<int> parts) {
  std::erase_if(parts, [](int x) { return x <= 0; });
  std::sort(parts.begin(), parts.end(), std::greater<>());
  Partition out;
  out.parts_ = std::move(parts);
  return out;
}

Partition Partition::parse(std::string_view text) {
  std::vector<int> parts;
  int current = -1;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      current = (current < 0 ? 0 : current * 10) + (c - '0');
    } else if (c == ' ' || c == ',' || c == '\t' || c == '[' || c == ']' || c == '(' || c == ')') {
      if (current >= 0) parts.push_back(current);
      current = -1;
    } else {
      throw InvalidArgument("malformed partition '" + std::string(text) + "'");
    }
  }
  if (current >= 0) parts.push_back(current);
  // A bare "0" denotes the trivial group.
  if (parts.size() == 1 && parts[0] == 0) parts.clear();
  return Partition(std::move(parts));
}

int Partition::size() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0); }

bool Partition::fits_inside(const Partition& other) const noexcept {
  if (length() > other.length()) return false;
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i] > other.parts_[i]) return false;
  return true;
}

Partition Partition::truncated(int cap) const {
  std::vector<int> out(parts_);
  for (int& x : out) x = std::min(x, cap);
  return Partition::from_unsorted(std::move(out));
}

std::string Partition::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i > 0) s += ' ';
    s += std::to_string(parts_[i]);
  }
  return s + "]";
}

Partition conjugate(const Partition& lambda) {
  std::vector<int> out(static_cast<std::size_t>(lambda.largest()), 0);
  for (int part : lambda.parts())
    for (int i = 0; i < part; ++i) ++out[static_cast<std::size_t>(i)];
  return Partition(std::move(out));
}

namespace {

void extend(std::vector<int>& prefix, int max_part, int max_length, std::vector<Partition>& out) {
  out.push_back(Partition(prefix));
  if (static_cast<int>(prefix.size()) == max_length) return;
  const int bound = prefix.empty() ? max_part : std::min(max_part, prefix.back());
  for (int x = 1; x <= bound; ++x) {
    prefix.push_back(x);
    extend(prefix, max_part, max_length, out);
    prefix.pop_back();
  }
}

void sort_by_size(std::vector<Partition>& ps) {
  std::sort(ps.begin(), ps.end(), [](const Partition& a, const Partition& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
}

}  // namespace

std::vector<Partition> partitions_in_box(int max_part, int max_length) {
  if (max_part < 0 || max_length < 0) throw InvalidArgument("negative partition box");
  std::vector<Partition> out;
  std::vector<int> prefix;
  extend(prefix, max_part, max_length, out);
  sort_by_size(out);
  return out;
}

std::vector<Partition> partitions_up_to(int max_size) {
  std::vector<Partition> box = partitions_in_box(max_size, max_size);
  std::erase_if(box, [max_size](const Partition& p) { return p.size() > max_size; });
  return box;
}

}  // namespace coklab
