#include "skewsim/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "skewsim/rng.hpp"

namespace skewsim {

SymbolWindow::SymbolWindow(int alphabet_size, long offset,
                           std::vector<int> symbols, Tail past_tail,
                           Tail future_tail)
    : k_(alphabet_size),
      offset_(offset),
      symbols_(std::move(symbols)),
      past_(past_tail),
      future_(future_tail) {
  if (k_ < 2) throw std::invalid_argument("alphabet size must be >= 2");
  for (int s : symbols_) {
    if (s < 0 || s >= k_) throw std::invalid_argument("symbol out of alphabet");
  }
  auto check_tail = [this](const Tail& t) {
    if (t.kind == TailKind::ConstantSymbol && (t.symbol < 0 || t.symbol >= k_))
      throw std::invalid_argument("tail symbol out of alphabet");
  };
  check_tail(past_);
  check_tail(future_);
}

SymbolWindow SymbolWindow::constant(int alphabet_size, int symbol) {
  return SymbolWindow(alphabet_size, 0, {symbol}, Tail::constant(symbol),
                      Tail::constant(symbol));
}

bool SymbolWindow::is_defined(long index) const {
  if (symbols_.empty())
    return index < offset_ ? past_.kind == TailKind::ConstantSymbol
                           : future_.kind == TailKind::ConstantSymbol;
  if (index < leftmost()) return past_.kind == TailKind::ConstantSymbol;
  if (index > rightmost()) return future_.kind == TailKind::ConstantSymbol;
  return true;
}

int SymbolWindow::at(long index) const {
  if (!symbols_.empty() && index >= leftmost() && index <= rightmost())
    return symbols_[static_cast<std::size_t>(index - offset_)];
  const Tail& t = (index < offset_) ? past_ : future_;
  if (t.kind == TailKind::ConstantSymbol) return t.symbol;
  throw OutOfWindowError(index);
}

SymbolWindow SymbolWindow::shifted(long n) const {
  SymbolWindow out = *this;
  out.offset_ -= n;
  return out;
}

std::string SymbolWindow::digest() const {
  // FNV-1a over the defining data; stable across runs.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(k_));
  mix(static_cast<std::uint64_t>(offset_));
  mix(static_cast<std::uint64_t>(past_.kind) * 251 + past_.symbol);
  mix(static_cast<std::uint64_t>(future_.kind) * 251 + future_.symbol);
  for (int s : symbols_) mix(static_cast<std::uint64_t>(s) + 1);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

BaseDistance base_distance(const SymbolWindow& w1, const SymbolWindow& w2) {
  if (w1.alphabet_size() != w2.alphabet_size()) throw AlphabetMismatchError();

  const long ext = std::max({std::labs(w1.leftmost()), std::labs(w1.rightmost()),
                             std::labs(w2.leftmost()), std::labs(w2.rightmost())});
  // Beyond ext + 1 both sequences are given by their tails alone.
  const long scan_limit = ext + 1;

  for (long m = 0;; ++m) {
    bool undetermined = false;
    for (long idx : {m, -m}) {
      if (idx == 0 && m != 0) continue;
      if (!w1.is_defined(idx) || !w2.is_defined(idx)) {
        undetermined = true;
        continue;
      }
      if (w1.at(idx) != w2.at(idx))
        return {std::ldexp(1.0, static_cast<int>(-m)), false};
    }
    if (undetermined) {
      // Agreement held on [-(m-1), m-1]; only a bound is determinable.
      return {std::ldexp(1.0, static_cast<int>(-m)), true};
    }
    if (m >= scan_limit) return {0.0, false};  // totally defined and equal
  }
}

SymbolWindow sample_bernoulli(int k, int past_depth, int future_depth,
                              std::uint64_t seed) {
  if (past_depth < 0 || future_depth < 0)
    throw std::invalid_argument("depths must be >= 0");
  Rng rng(seed);
  std::vector<int> symbols(static_cast<std::size_t>(past_depth + future_depth + 1));
  for (auto& s : symbols) s = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
  return SymbolWindow(k, -past_depth, std::move(symbols));
}

bool in_cylinder(const SymbolWindow& w, const SymbolWindow& center, int N) {
  for (long i = -N; i <= N; ++i) {
    if (w.at(i) != center.at(i)) return false;
  }
  return true;
}

static nlohmann::json tail_to_json(const Tail& t) {
  if (t.kind == TailKind::Unspecified) return "unspecified";
  return nlohmann::json{{"constant", t.symbol}};
}

static Tail tail_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "unspecified")
    return Tail::unspecified();
  return Tail::constant(j.at("constant").get<int>());
}

void to_json(nlohmann::json& j, const SymbolWindow& w) {
  j = nlohmann::json{{"k", w.alphabet_size()},
                     {"offset", w.offset()},
                     {"symbols", w.symbols()},
                     {"past_tail", tail_to_json(w.past_tail())},
                     {"future_tail", tail_to_json(w.future_tail())}};
}

void from_json(const nlohmann::json& j, SymbolWindow& w) {
  w = SymbolWindow(j.at("k").get<int>(), j.at("offset").get<long>(),
                   j.at("symbols").get<std::vector<int>>(),
                   tail_from_json(j.at("past_tail")),
                   tail_from_json(j.at("future_tail")));
}

}  // namespace skewsim
