#include "rfs/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "rfs/errors.hpp"
#include "rfs/kahan.hpp"

namespace rfs {

FourierFunction::FourierFunction(std::vector<Coefficient> coeffs) {
  std::sort(coeffs.begin(), coeffs.end(),
            [](const Coefficient& a, const Coefficient& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
    if (coeffs[i].first == coeffs[i + 1].first)
      throw ConfigError("FourierFunction: duplicate frequency " +
                        std::to_string(coeffs[i].first));
  }
  for (auto& [j, c] : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ConfigError("FourierFunction: non-finite coefficient at j=" +
                        std::to_string(j));
    if (c != std::complex<double>{0.0, 0.0}) coeffs_.push_back({j, c});
  }
}

std::complex<double> FourierFunction::evaluate(double alpha) const {
  KahanComplex acc;
  for (const auto& [j, c] : coeffs_) {
    const double theta = 2.0 * M_PI * alpha * static_cast<double>(j);
    acc += c * std::complex<double>{std::cos(theta), std::sin(theta)};
  }
  return acc.value();
}

double FourierFunction::norm_A() const {
  KahanReal acc;
  for (const auto& [j, c] : coeffs_) acc += std::abs(c);
  return acc.value();
}

double FourierFunction::norm_B() const {
  KahanReal acc;
  for (const auto& [j, c] : coeffs_)
    acc += std::abs(c) * std::sqrt(std::log(std::abs(static_cast<double>(j)) + 3.0));
  return acc.value();
}

bool FourierFunction::mean_zero() const {
  for (const auto& [j, c] : coeffs_)
    if (j == 0) return false;
  return true;
}

FourierFunction FourierFunction::operator+(const FourierFunction& other) const {
  std::map<std::int64_t, std::complex<double>> merged;
  for (const auto& [j, c] : coeffs_) merged[j] += c;
  for (const auto& [j, c] : other.coeffs_) merged[j] += c;
  std::vector<Coefficient> out(merged.begin(), merged.end());
  return FourierFunction(std::move(out));
}

std::string FourierFunction::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [j, c] : coeffs_)
    arr.push_back({{"j", j}, {"re", c.real()}, {"im", c.imag()}});
  return nlohmann::json{{"coeffs", arr}}.dump();
}

FourierFunction FourierFunction::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("FourierFunction: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("coeffs") || !doc["coeffs"].is_array())
    throw ConfigError("FourierFunction: expected {\"coeffs\": [...]}");
  for (auto& [key, value] : doc.items())
    if (key != "coeffs") throw ConfigError("FourierFunction: unknown field \"" + key + "\"");
  std::vector<Coefficient> coeffs;
  for (const auto& entry : doc["coeffs"]) {
    if (!entry.is_object() || !entry.contains("j") || !entry.contains("re") ||
        !entry.contains("im"))
      throw ConfigError("FourierFunction: entry must be {\"j\",\"re\",\"im\"}");
    for (auto& [key, value] : entry.items())
      if (key != "j" && key != "re" && key != "im")
        throw ConfigError("FourierFunction: unknown field \"" + key + "\"");
    coeffs.push_back({entry["j"].get<std::int64_t>(),
                      {entry["re"].get<double>(), entry["im"].get<double>()}});
  }
  return FourierFunction(std::move(coeffs));
}

}  // namespace rfs
