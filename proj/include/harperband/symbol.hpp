#pragma once

#include <map>
#include <string>

#include "harperband/common.hpp"

namespace harperband {

// Frequency pair (m, n) of the elementary wave exp(i(m p + n x)).
struct Freq {
  int m = 0;
  int n = 0;
  auto operator<=>(const Freq&) const = default;
};

// Doubly 2pi-periodic real-analytic Hamiltonian stored as a finite Fourier
// series H(p, x) = sum c_{mn} exp(i(m p + n x)) with the reality constraint
// c_{-m,-n} = conj(c_{mn}).  Immutable after construction.
class TrigSymbol {
 public:
  static constexpr int kDefaultFreqCap = 16;

  using CoeffMap = std::map<Freq, Complex>;

  TrigSymbol() = default;
  explicit TrigSymbol(CoeffMap coeffs, int freq_cap = kDefaultFreqCap);

  // 2 cos p + 2 alpha cos x.
  static TrigSymbol harper(double alpha);
  // Convenience: sum of cosine terms amp*2cos(m p + n x)/2... each entry
  // contributes amp*cos(m p + n x).
  static TrigSymbol from_cosines(
      const std::map<Freq, double>& cosine_amps, int freq_cap = kDefaultFreqCap);

  const CoeffMap& coeffs() const { return coeffs_; }
  int freq_cap() const { return freq_cap_; }
  double coeff_scale() const { return coeff_scale_; }  // sum |c_mn|
  bool empty() const { return coeffs_.empty(); }

  double evaluate(const Point2& pt) const;
  Vec2 gradient(const Point2& pt) const;
  Mat2 hessian(const Point2& pt) const;

  // Returns the symbol in new canonical coordinates z' with
  // H'(z') := H(M z'), M integer with det M = 1.  Frequencies are remapped
  // by M^T, so evaluate(transform(H, M), pt) == evaluate(H, M pt).
  TrigSymbol canonical_transform(const IMat2& M) const;

  // Returns a copy with the cosine amplitude of `key` (and its conjugate
  // partner) set to `amp`.
  TrigSymbol with_cosine(const Freq& key, double amp) const;
  // Current cosine amplitude at `key` (2 * real part of c_key).
  double cosine_amp(const Freq& key) const;

 private:
  CoeffMap coeffs_;
  int freq_cap_ = kDefaultFreqCap;
  double coeff_scale_ = 0.0;
};

// JSON symbol schema: {"terms":[ {"cos":[m,n],"amp":a}
//                              | {"sin":[m,n],"amp":a}
//                              | {"m":m,"n":n,"re":r,"im":i} ]}
TrigSymbol parse_symbol(const std::string& json_text,
                        int freq_cap = TrigSymbol::kDefaultFreqCap);
std::string serialize_symbol(const TrigSymbol& symbol);

}  // namespace harperband
