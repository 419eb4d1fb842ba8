#include "qimage/fisher_report.hpp"

#include <cmath>
#include <sstream>

#include "qimage/errors.hpp"
#include "qimage/units.hpp"

namespace qimage {

std::string to_string(StatModel m) {
  switch (m) {
    case StatModel::PoissonContinuum: return "poisson-continuum";
    case StatModel::PoissonPixel: return "poisson-pixel";
    case StatModel::GaussianPixel: return "gaussian-pixel";
    case StatModel::ClosedForm: return "closed-form";
  }
  return "unknown";
}

FisherReport FisherReport::make(double F, StatModel model, nlohmann::json provenance,
                                double scale) {
  if (!(std::isfinite(F) && F > 0.0)) {
    std::ostringstream msg;
    msg << "Fisher information must be positive and finite, got " << F;
    throw Error("nonpositive_fisher", msg.str());
  }
  FisherReport r;
  r.F = F;
  r.F_scaled = F * scale * scale;
  r.crb_sigma = 1.0 / std::sqrt(F);
  r.model = model;
  r.provenance = std::move(provenance);
  r.provenance["units"] = units::kConvention;
  return r;
}

void to_json(nlohmann::json& j, const FisherReport& r) {
  j = {{"F", r.F},
       {"F_scaled", r.F_scaled},
       {"crb_sigma", r.crb_sigma},
       {"model", to_string(r.model)},
       {"provenance", r.provenance},
       {"components", r.components},
       {"warnings", r.warnings}};
}

}  // namespace qimage
