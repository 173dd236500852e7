#pragma once

// Symbolic side of an IFS: finite addresses over {1..N}, cylinders of the code
// space, the metric rho and the measure nu(C_I) = r_I^alpha.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <string>
#include <vector>

namespace ssb {

inline constexpr std::uint64_t kDefaultBudget = 5'000'000;

/// Finite symbol string; symbols are 1-based. The empty address is valid.
class Address {
 public:
  Address() = default;
  Address(std::initializer_list<int> symbols) : symbols_(symbols) {}
  explicit Address(std::vector<int> symbols) : symbols_(std::move(symbols)) {}

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  int operator[](std::size_t k) const { return symbols_[k]; }
  int front() const { return symbols_.front(); }
  const std::vector<int>& symbols() const noexcept { return symbols_; }
  auto begin() const noexcept { return symbols_.begin(); }
  auto end() const noexcept { return symbols_.end(); }

  bool starts_with(const Address& prefix) const;
  Address prefix(std::size_t n) const;
  std::string to_string() const;

  friend Address operator+(const Address& a, const Address& b);
  friend bool operator==(const Address&, const Address&) = default;
  friend auto operator<=>(const Address&, const Address&) = default;

 private:
  std::vector<int> symbols_;
};

/// Throws std::out_of_range if any symbol is outside 1..n_maps.
void check_symbols(const Address& a, std::size_t n_maps);

class RatioTable {
 public:
  explicit RatioTable(std::vector<double> ratios);

  std::size_t size() const noexcept { return ratios_.size(); }
  /// 1-based.
  double ratio(int symbol) const { return ratios_.at(static_cast<std::size_t>(symbol - 1)); }
  /// r_i^alpha, 1-based.
  double weight(int symbol) const { return weights_.at(static_cast<std::size_t>(symbol - 1)); }
  const std::vector<double>& ratios() const noexcept { return ratios_; }
  double alpha() const noexcept { return alpha_; }
  double r_max() const noexcept { return r_max_; }
  double r_min() const noexcept { return r_min_; }

 private:
  std::vector<double> ratios_;
  std::vector<double> weights_;
  double alpha_ = 0;
  double r_max_ = 0;
  double r_min_ = 0;
};

double r_of(const Address& a, const RatioTable& t);
/// Product of all but the last ratio; 1 for |I| = 1 and +infinity for the empty address.
double r_star_of(const Address& a, const RatioTable& t);
bool incomparable(const Address& a, const Address& b);
double nu_cylinder(const Address& a, const RatioTable& t);
Address prepend(int symbol, const Address& a);

/// Eventually constant point of the code space: prefix followed by tail, tail, tail, ...
struct CodeSequence {
  Address prefix;
  int tail = 1;

  int at(std::size_t k) const { return k < prefix.size() ? prefix[k] : tail; }
};

double rho(const CodeSequence& a, const CodeSequence& b, const RatioTable& t);

/// N^depth, throwing BudgetExceeded when above `budget`.
std::uint64_t checked_count(std::size_t n_maps, int depth, std::uint64_t budget = kDefaultBudget);

/// Lexicographic position of a depth-|a| address (first symbol most significant).
std::uint64_t index_of(const Address& a, std::size_t n_maps);
Address address_from_index(std::uint64_t index, int depth, std::size_t n_maps);

/// All N^depth addresses of one length in lexicographic order, generated lazily.
class AddressRange {
 public:
  AddressRange(int depth, std::size_t n_maps, std::uint64_t budget = kDefaultBudget);

  class iterator {
   public:
    using value_type = Address;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    const Address& operator*() const { return current_; }
    const Address* operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.remaining_ == b.remaining_; }

   private:
    friend class AddressRange;
    Address current_;
    std::size_t n_maps_ = 0;
    std::uint64_t remaining_ = 0;
  };

  iterator begin() const;
  iterator end() const { return {}; }
  std::uint64_t size() const noexcept { return count_; }

 private:
  int depth_;
  std::size_t n_maps_;
  std::uint64_t count_;
};

inline AddressRange enumerate_depth(int depth, std::size_t n_maps, std::uint64_t budget = kDefaultBudget) {
  return AddressRange(depth, n_maps, budget);
}

}  // namespace ssb
