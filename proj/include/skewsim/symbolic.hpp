#pragma once

// Bernoulli base: finite windows of two-sided symbol sequences, the shift,
// the product-topology metric, cylinders and i.i.d. sampling.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace skewsim {

struct OutOfWindowError : std::out_of_range {
  explicit OutOfWindowError(long index)
      : std::out_of_range("symbol at index " + std::to_string(index) +
                          " is outside the window and the tail is unspecified"),
        index(index) {}
  long index;
};

struct AlphabetMismatchError : std::invalid_argument {
  AlphabetMismatchError() : std::invalid_argument("alphabet sizes differ") {}
};

enum class TailKind { Unspecified, ConstantSymbol };

struct Tail {
  TailKind kind = TailKind::Unspecified;
  int symbol = 0;  // meaningful only for ConstantSymbol

  static Tail unspecified() { return {TailKind::Unspecified, 0}; }
  static Tail constant(int s) { return {TailKind::ConstantSymbol, s}; }
  bool operator==(const Tail&) const = default;
};

// A finite window omega_{offset..offset+size-1} of a two-sided sequence in
// Sigma_k, with declared conventions for both tails. Immutable.
class SymbolWindow {
 public:
  SymbolWindow() : k_(2), offset_(0) {}
  SymbolWindow(int alphabet_size, long offset, std::vector<int> symbols,
               Tail past_tail = Tail::unspecified(),
               Tail future_tail = Tail::unspecified());

  // Constant sequence s^infty (both tails ConstantSymbol(s), empty storage).
  static SymbolWindow constant(int alphabet_size, int symbol);

  int alphabet_size() const { return k_; }
  long offset() const { return offset_; }
  const std::vector<int>& symbols() const { return symbols_; }
  const Tail& past_tail() const { return past_; }
  const Tail& future_tail() const { return future_; }

  long leftmost() const { return offset_; }
  long rightmost() const { return offset_ + static_cast<long>(symbols_.size()) - 1; }

  bool is_defined(long index) const;
  bool totally_defined() const {
    return past_.kind == TailKind::ConstantSymbol &&
           future_.kind == TailKind::ConstantSymbol;
  }

  // Symbol at absolute index; throws OutOfWindowError beyond an Unspecified tail.
  int at(long index) const;

  // Window shifted so that at(i) of the result equals at(i + n) of *this.
  SymbolWindow shifted(long n) const;

  bool operator==(const SymbolWindow&) const = default;

  std::string digest() const;  // short stable identifier for reports

 private:
  int k_;
  long offset_;
  std::vector<int> symbols_;
  Tail past_, future_;
};

inline SymbolWindow shift(const SymbolWindow& w) { return w.shifted(1); }
inline SymbolWindow inverse_shift(const SymbolWindow& w) { return w.shifted(-1); }

struct BaseDistance {
  double value = 0.0;
  // True when the sequences agree on the whole determinable range and at
  // least one tail is unspecified; `value` is then only an upper bound.
  bool bound_only = false;
};

// d(w1, w2) = 2^-m with m = min{|i| : w1_i != w2_i}.
BaseDistance base_distance(const SymbolWindow& w1, const SymbolWindow& w2);

// i.i.d. uniform symbols on [-past_depth, future_depth], tails unspecified.
SymbolWindow sample_bernoulli(int k, int past_depth, int future_depth,
                              std::uint64_t seed);

// True iff the two windows agree on [-N, N].
bool in_cylinder(const SymbolWindow& w, const SymbolWindow& center, int N);

void to_json(nlohmann::json& j, const SymbolWindow& w);
void from_json(const nlohmann::json& j, SymbolWindow& w);

}  // namespace skewsim
