#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qimage {

enum class StatModel { PoissonContinuum, PoissonPixel, GaussianPixel, ClosedForm };

std::string to_string(StatModel m);

struct FisherReport {
  double F = 0.0;          // 1 / xi^2
  double F_scaled = 0.0;   // F xi^2
  double crb_sigma = 0.0;  // F^(-1/2), xi
  StatModel model = StatModel::ClosedForm;
  nlohmann::json provenance = nlohmann::json::object();
  std::map<std::string, double> components;
  std::vector<std::string> warnings;

  // Builds a report; `scale` is the length unit of F_scaled (1 for xi).
  static FisherReport make(double F, StatModel model, nlohmann::json provenance,
                           double scale = 1.0);
};

void to_json(nlohmann::json& j, const FisherReport& r);

}  // namespace qimage
