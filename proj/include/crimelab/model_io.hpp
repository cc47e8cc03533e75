#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "crimelab/model.hpp"

namespace crimelab {

/// Versioned binary model files (magic "CLMD"). Doubles travel bit-exact, so
/// a reloaded model predicts identically to the one saved. Ensembles nest
/// their bases; bagged members keep their feature masks, while training row
/// draws are not persisted (they matter only for in-memory replay checks).
void save_model(const Classifier& model, const std::string& path);
std::unique_ptr<Classifier> load_model(const std::string& path);

/// Structural description: kind, shapes, per-part statistics, nested bases.
nlohmann::json model_summary_json(const Classifier& model);

}  // namespace crimelab
