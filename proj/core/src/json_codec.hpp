#ifndef PAM_SRC_JSON_CODEC_HPP
#define PAM_SRC_JSON_CODEC_HPP

#include <json.hpp>

#include "pam/chaos.hpp"
#include "pam/grid.hpp"
#include "pam/noise_spec.hpp"

namespace pam {

nlohmann::json noise_to_json(const NoiseSpec& spec);
NoiseSpec noise_from_json(const nlohmann::json& j);

nlohmann::json grid_to_json(const GridSpec& grid);
GridSpec grid_from_json(const nlohmann::json& j);

nlohmann::json u0_to_json(const InitialCondition& u0);
InitialCondition u0_from_json(const nlohmann::json& j);

}  // namespace pam

#endif
