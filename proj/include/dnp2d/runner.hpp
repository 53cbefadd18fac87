#pragma once

#include "dnp2d/config.hpp"
#include "dnp2d/io.hpp"

namespace dnp2d::runner {

// Dispatches a validated configuration to the module entry points, writes all
// artifacts atomically under cfg.out_dir, and returns the manifest (also
// written there as manifest.json).  Deterministic given the configuration.
io::RunManifest run(const config::SimConfig& cfg);

}  // namespace dnp2d::runner
