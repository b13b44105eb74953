#pragma once

#include <string>

#include "qnet/config.hpp"

namespace qnet {

// Config-driven commands behind the CLI verbs.  Each resolves the full
// configuration (defaults <- file <- environment <- flags, already merged
// into cfg by the caller), executes, and writes its artifacts into out_dir.
// Failures propagate as the library's error types; the CLI maps them to
// exit codes.

// Simulates the configured system and writes trajectory_quantum.csv,
// trajectory_circuit.csv, envelope.csv, metrics.json and provenance.json
// (the circuit-side files only when the run has a circuit side).
void run_experiment(Config& cfg, const std::string& out_dir);

// Synthesizes the configured network and writes components.csv and
// dac_codes.csv.
void synthesize_experiment(Config& cfg, const std::string& out_dir);

// Runs the disorder ensemble and writes ensemble_mean.csv,
// ensemble_metrics.json and provenance.json (plus per-realization
// trajectories when requested).
void run_ensemble(Config& cfg, const std::string& out_dir);

// Human-readable listing of the bundled presets and their component values.
std::string presets_listing();

}  // namespace qnet
