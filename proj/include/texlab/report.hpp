#pragma once

#include <span>
#include <string>

#include "json.hpp"

#include "texlab/channels.hpp"
#include "texlab/circuit.hpp"
#include "texlab/identify.hpp"
#include "texlab/paramagnet.hpp"
#include "texlab/texture.hpp"
#include "texlab/trial_engine.hpp"

namespace texlab {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// 17 significant digits; non-finite values become "inf", "-inf" or "nan".
Json number(double v);

/// Deterministic text: sorted keys, two-space indent, doubles at %.17g,
/// trailing newline.
std::string canonical_dump(const Json& j);

/// {"dim": D, "matrix": [[[re, im], ...], ...]}
DensityOperator parse_density(const Json& j);
Json density_to_json(const DensityOperator& rho);

/// {"dim": D, "kraus": [matrix, ...]} with matrices as in parse_density.
KrausChannel parse_channel(const Json& j);
Json channel_to_json(const KrausChannel& ch);

CircuitLayer parse_layer(const Json& j);
Json layer_to_json(const CircuitLayer& layer);

Json texture_to_json(const TextureReading& r);
Json report_to_json(const ProtocolReport& r);
Json paramagnet_to_json(std::span<const RugosityRow> rows);

/// track,X,stderr_X,Y,stderr_Y,trials
std::string stats_csv(std::span<const TrackStats> stats);
/// x,rugosity_quadrature,paper_closed_form,alt_closed_form,residual_paper,residual_alt
std::string paramagnet_csv(std::span<const RugosityRow> rows);

}  // namespace texlab
