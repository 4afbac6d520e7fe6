#pragma once

// CSV and JSON writers. Floats in CSV use 17 significant digits; lines end in LF.

#include "curved2body/continuation.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>

namespace curved2body {

std::string format_double(double x);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_reconstruction_csv(std::ostream& os, const Reconstruction& rec);
void write_family_csv(std::ostream& os, const FamilyTable& table);
void write_raster_csv(std::ostream& os, const RegionRaster& raster);

nlohmann::ordered_json to_json(const ReducedState& s);
nlohmann::ordered_json to_json(const RelEquilibrium& re);
nlohmann::ordered_json to_json(const Classification& c);
nlohmann::ordered_json spectrum_json(const RelEquilibrium& re, const SpectrumReport& sp,
                                     const std::optional<LeafSignature>& leaf = std::nullopt);
nlohmann::ordered_json raster_sidecar_json(const RegionRaster& raster);

}  // namespace curved2body
