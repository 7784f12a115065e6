#pragma once

// Batch front end: a validated RunConfig dispatches to module operations and
// comes back as a RunReport with CSV tables, a pass flag for the declared
// tolerances, and content fingerprints.  Timings are reported but excluded
// from the fingerprint so identical (config, seed) runs hash identically.

#include "io.hpp"

namespace specshift {

struct RunOutcome {
  json report;
  bool pass = false;
};

// config: {"subcommand": "...", ...params}; throws Errc::parse /
// invalid_argument on schema violations before any computation starts.
RunOutcome run_config(const json& config);

}  // namespace specshift
