#include "harperband/symbol.hpp"

#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace harperband {

namespace {

constexpr double kRealityTol = 1e-12;
constexpr double kDropTol = 0.0;  // keep exact zeros out of the map

void check_reality(const TrigSymbol::CoeffMap& coeffs, double scale) {
  for (const auto& [f, c] : coeffs) {
    auto it = coeffs.find(Freq{-f.m, -f.n});
    Complex partner = (it == coeffs.end()) ? Complex{0.0, 0.0} : it->second;
    if (std::abs(partner - std::conj(c)) > kRealityTol * std::max(1.0, scale)) {
      std::ostringstream os;
      os << "coefficient (" << f.m << "," << f.n
         << ") breaks conjugate symmetry";
      throw RealityViolation(os.str());
    }
  }
}

}  // namespace

TrigSymbol::TrigSymbol(CoeffMap coeffs, int freq_cap) : freq_cap_(freq_cap) {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (std::abs(it->second) <= kDropTol) {
      it = coeffs.erase(it);
    } else {
      if (std::abs(it->first.m) > freq_cap_ || std::abs(it->first.n) > freq_cap_) {
        std::ostringstream os;
        os << "frequency (" << it->first.m << "," << it->first.n
           << ") exceeds cap " << freq_cap_;
        throw FrequencyCapExceeded(os.str());
      }
      coeff_scale_ += std::abs(it->second);
      ++it;
    }
  }
  coeffs_ = std::move(coeffs);
  check_reality(coeffs_, coeff_scale_);
}

TrigSymbol TrigSymbol::harper(double alpha) {
  return from_cosines({{Freq{1, 0}, 2.0}, {Freq{0, 1}, 2.0 * alpha}});
}

TrigSymbol TrigSymbol::from_cosines(const std::map<Freq, double>& cosine_amps,
                                    int freq_cap) {
  CoeffMap coeffs;
  for (const auto& [f, a] : cosine_amps) {
    coeffs[f] += Complex{a / 2.0, 0.0};
    coeffs[Freq{-f.m, -f.n}] += Complex{a / 2.0, 0.0};
  }
  return TrigSymbol(std::move(coeffs), freq_cap);
}

double TrigSymbol::evaluate(const Point2& pt) const {
  Complex acc{0.0, 0.0};
  for (const auto& [f, c] : coeffs_) {
    double phase = f.m * pt.p + f.n * pt.x;
    acc += c * std::polar(1.0, phase);
  }
  if (std::abs(acc.imag()) > kRealityTol * std::max(1.0, coeff_scale_)) {
    throw RealityViolation("evaluate produced a non-real value");
  }
  return acc.real();
}

Vec2 TrigSymbol::gradient(const Point2& pt) const {
  Complex dp{0.0, 0.0}, dx{0.0, 0.0};
  for (const auto& [f, c] : coeffs_) {
    Complex w = c * std::polar(1.0, f.m * pt.p + f.n * pt.x);
    dp += Complex{0.0, double(f.m)} * w;
    dx += Complex{0.0, double(f.n)} * w;
  }
  double tol = kRealityTol * std::max(1.0, coeff_scale_) * (1.0 + freq_cap_);
  if (std::abs(dp.imag()) > tol || std::abs(dx.imag()) > tol) {
    throw RealityViolation("gradient produced a non-real value");
  }
  return {dp.real(), dx.real()};
}

Mat2 TrigSymbol::hessian(const Point2& pt) const {
  Complex dpp{0, 0}, dpx{0, 0}, dxx{0, 0};
  for (const auto& [f, c] : coeffs_) {
    Complex w = c * std::polar(1.0, f.m * pt.p + f.n * pt.x);
    dpp += -double(f.m) * double(f.m) * w;
    dpx += -double(f.m) * double(f.n) * w;
    dxx += -double(f.n) * double(f.n) * w;
  }
  return {dpp.real(), dpx.real(), dxx.real()};
}

TrigSymbol TrigSymbol::canonical_transform(const IMat2& M) const {
  if (M.det() != 1) {
    throw NotUnimodular("det M = " + std::to_string(M.det()));
  }
  IMat2 Mt = M.transposed();
  CoeffMap out;
  for (const auto& [f, c] : coeffs_) {
    auto g = Mt.apply(std::array<int, 2>{f.m, f.n});
    out[Freq{g[0], g[1]}] += c;
  }
  return TrigSymbol(std::move(out), freq_cap_);
}

TrigSymbol TrigSymbol::with_cosine(const Freq& key, double amp) const {
  CoeffMap out = coeffs_;
  auto old = cosine_amp(key);
  out[key] += Complex{(amp - old) / 2.0, 0.0};
  out[Freq{-key.m, -key.n}] += Complex{(amp - old) / 2.0, 0.0};
  return TrigSymbol(std::move(out), freq_cap_);
}

double TrigSymbol::cosine_amp(const Freq& key) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? 0.0 : 2.0 * it->second.real();
}

TrigSymbol parse_symbol(const std::string& json_text, int freq_cap) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.contains("terms") || !j["terms"].is_array()) {
    throw ParseError("missing \"terms\" array");
  }
  TrigSymbol::CoeffMap coeffs;
  bool has_explicit = false;
  int idx = 0;
  for (const auto& term : j["terms"]) {
    std::string where = "terms[" + std::to_string(idx++) + "]";
    if (term.contains("cos") || term.contains("sin")) {
      bool is_cos = term.contains("cos");
      const auto& mn = term[is_cos ? "cos" : "sin"];
      if (!mn.is_array() || mn.size() != 2 || !term.contains("amp")) {
        throw ParseError(where + ": expected {\"cos|sin\":[m,n],\"amp\":a}");
      }
      int m = mn[0].get<int>();
      int n = mn[1].get<int>();
      double a = term["amp"].get<double>();
      if (is_cos) {
        coeffs[Freq{m, n}] += Complex{a / 2.0, 0.0};
        coeffs[Freq{-m, -n}] += Complex{a / 2.0, 0.0};
      } else {
        coeffs[Freq{m, n}] += Complex{0.0, -a / 2.0};
        coeffs[Freq{-m, -n}] += Complex{0.0, a / 2.0};
      }
    } else if (term.contains("m") && term.contains("n")) {
      if (!term.contains("re") && !term.contains("im")) {
        throw ParseError(where + ": explicit term needs \"re\" and/or \"im\"");
      }
      int m = term["m"].get<int>();
      int n = term["n"].get<int>();
      double re = term.value("re", 0.0);
      double im = term.value("im", 0.0);
      coeffs[Freq{m, n}] += Complex{re, im};
      has_explicit = true;
    } else {
      throw ParseError(where + ": unrecognized term shape");
    }
  }
  (void)has_explicit;
  // TrigSymbol's constructor runs the conjugate-symmetry check, which is what
  // rejects explicit coefficients lacking their partner.
  return TrigSymbol(std::move(coeffs), freq_cap);
}

std::string serialize_symbol(const TrigSymbol& symbol) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [f, c] : symbol.coeffs()) {
    // Emit each stored pair once, as cos/sin shorthand, keyed on the
    // lexicographically positive member.
    if (f.m < 0 || (f.m == 0 && f.n < 0)) continue;
    if (f.m == 0 && f.n == 0) {
      terms.push_back({{"cos", {0, 0}}, {"amp", c.real()}});
      continue;
    }
    if (std::abs(c.real()) > 0.0) {
      terms.push_back({{"cos", {f.m, f.n}}, {"amp", 2.0 * c.real()}});
    }
    if (std::abs(c.imag()) > 0.0) {
      terms.push_back({{"sin", {f.m, f.n}}, {"amp", -2.0 * c.imag()}});
    }
  }
  nlohmann::json j;
  j["terms"] = terms;
  return j.dump();
}

}  // namespace harperband
