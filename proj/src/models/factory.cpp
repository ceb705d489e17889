#include "tmef/error.hpp"
#include "tmef/models.hpp"
#include "tmef/models/binary_markov.hpp"
#include "tmef/models/gamma_ar1.hpp"
#include "tmef/models/gaussian_ar1.hpp"
#include "tmef/models/stable_ar1.hpp"

namespace tmef {

std::optional<ModelId> parse_model_id(std::string_view name) {
  if (name == "stable-ar1" || name == "stable") return ModelId::StableAR1;
  if (name == "gar1" || name == "gamma-ar1") return ModelId::GammaAR1;
  if (name == "gaussian-ar1" || name == "gaussian") return ModelId::GaussianAR1;
  if (name == "binary-markov" || name == "binary") return ModelId::BinaryMarkov;
  return std::nullopt;
}

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::StableAR1: return "stable-ar1";
    case ModelId::GammaAR1: return "gar1";
    case ModelId::GaussianAR1: return "gaussian-ar1";
    case ModelId::BinaryMarkov: return "binary-markov";
  }
  return "unknown";
}

std::unique_ptr<ProcessModel> make_model(ModelId id, const ModelOptions& options) {
  switch (id) {
    case ModelId::StableAR1: return std::make_unique<StableAR1>(options.stable_alpha);
    case ModelId::GammaAR1: return std::make_unique<GammaAR1>();
    case ModelId::GaussianAR1: return std::make_unique<GaussianAR1>(options.gaussian_sigma);
    case ModelId::BinaryMarkov: return std::make_unique<BinaryMarkov>();
  }
  throw Error(ErrorCode::InvalidParams, "unknown model id");
}

}  // namespace tmef
