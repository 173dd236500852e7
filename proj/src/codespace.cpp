#include "ssb/codespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ssb/analysis.hpp"
#include "ssb/error.hpp"

namespace ssb {

bool Address::starts_with(const Address& p) const {
  return p.size() <= size() && std::equal(p.begin(), p.end(), begin());
}

Address Address::prefix(std::size_t n) const {
  return Address(std::vector<int>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(std::min(n, size()))));
}

std::string Address::to_string() const {
  if (empty()) return "()";
  std::string s;
  for (std::size_t k = 0; k < size(); ++k) {
    if (k) s += '.';
    s += std::to_string(symbols_[k]);
  }
  return s;
}

Address operator+(const Address& a, const Address& b) {
  std::vector<int> s = a.symbols_;
  s.insert(s.end(), b.begin(), b.end());
  return Address(std::move(s));
}

void check_symbols(const Address& a, std::size_t n_maps) {
  for (int s : a) {
    if (s < 1 || static_cast<std::size_t>(s) > n_maps) {
      throw std::out_of_range("symbol " + std::to_string(s) + " outside 1.." + std::to_string(n_maps));
    }
  }
}

RatioTable::RatioTable(std::vector<double> ratios) : ratios_(std::move(ratios)) {
  alpha_ = similarity_dimension(ratios_);
  weights_.reserve(ratios_.size());
  for (double r : ratios_) weights_.push_back(std::pow(r, alpha_));
  r_max_ = *std::max_element(ratios_.begin(), ratios_.end());
  r_min_ = *std::min_element(ratios_.begin(), ratios_.end());
}

double r_of(const Address& a, const RatioTable& t) {
  check_symbols(a, t.size());
  double r = 1.0;
  for (int s : a) r *= t.ratio(s);
  return r;
}

double r_star_of(const Address& a, const RatioTable& t) {
  check_symbols(a, t.size());
  if (a.empty()) return std::numeric_limits<double>::infinity();
  return r_of(a.prefix(a.size() - 1), t);
}

bool incomparable(const Address& a, const Address& b) { return !a.starts_with(b) && !b.starts_with(a); }

double nu_cylinder(const Address& a, const RatioTable& t) {
  check_symbols(a, t.size());
  double v = 1.0;
  for (int s : a) v *= t.weight(s);
  return v;
}

Address prepend(int symbol, const Address& a) { return Address{symbol} + a; }

double rho(const CodeSequence& a, const CodeSequence& b, const RatioTable& t) {
  // beyond both prefixes the sequences are constant, so one extra position decides equality
  const std::size_t horizon = std::max(a.prefix.size(), b.prefix.size()) + 1;
  std::size_t m = 0;
  while (m < horizon && a.at(m) == b.at(m)) ++m;
  if (m == horizon) return 0.0;
  if (m == 0) return 1.0;
  double r = 1.0;
  for (std::size_t k = 0; k < m; ++k) r *= t.ratio(a.at(k));
  return r;
}

std::uint64_t checked_count(std::size_t n_maps, int depth, std::uint64_t budget) {
  if (depth < 0) throw std::invalid_argument("depth must be non-negative");
  std::uint64_t count = 1;
  for (int k = 0; k < depth; ++k) {
    if (count > budget / n_maps) {
      const bool saturate = count > std::numeric_limits<std::uint64_t>::max() / n_maps;
      throw BudgetExceeded(saturate ? std::numeric_limits<std::uint64_t>::max() : count * n_maps, budget);
    }
    count *= n_maps;
  }
  if (count > budget) throw BudgetExceeded(count, budget);
  return count;
}

std::uint64_t index_of(const Address& a, std::size_t n_maps) {
  check_symbols(a, n_maps);
  std::uint64_t idx = 0;
  for (int s : a) idx = idx * n_maps + static_cast<std::uint64_t>(s - 1);
  return idx;
}

Address address_from_index(std::uint64_t index, int depth, std::size_t n_maps) {
  std::vector<int> s(static_cast<std::size_t>(depth));
  for (int k = depth - 1; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] = static_cast<int>(index % n_maps) + 1;
    index /= n_maps;
  }
  return Address(std::move(s));
}

AddressRange::AddressRange(int depth, std::size_t n_maps, std::uint64_t budget)
    : depth_(depth), n_maps_(n_maps), count_(checked_count(n_maps, depth, budget)) {}

AddressRange::iterator AddressRange::begin() const {
  iterator it;
  it.current_ = Address(std::vector<int>(static_cast<std::size_t>(depth_), 1));
  it.n_maps_ = n_maps_;
  it.remaining_ = count_;
  return it;
}

AddressRange::iterator& AddressRange::iterator::operator++() {
  if (--remaining_ == 0) return *this;
  std::vector<int> s = current_.symbols();
  for (auto k = s.size(); k-- > 0;) {
    if (static_cast<std::size_t>(s[k]) < n_maps_) {
      ++s[k];
      break;
    }
    s[k] = 1;
  }
  current_ = Address(std::move(s));
  return *this;
}

}  // namespace ssb
