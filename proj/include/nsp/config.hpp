#pragma once

#include <filesystem>
#include <string>

#include "nsp/model.hpp"
#include "nsp/solver.hpp"
#include "nsp/stationary.hpp"

namespace nsp {

/// Full run configuration, parsed from the flat `key = value` format
/// (comments start with '#'; unknown keys are errors).
struct RunConfig {
    GasModel gas;
    SolverConfig solver;

    std::string initial; ///< lane-emden | uniform | file
    double rho_c = 1.0;
    double truncation_floor = 0.0;
    double target_mass = 0.0; ///< 0: natural profile mass
    double uniform_rho = 1.0;
    double a0 = 1.0;
    std::string profile_file;
    double perturb_amplitude = 0.0;
    std::string perturb_mode = "cubic";

    double a_gamma = 1.0;
    double l = 0.0;     ///< 0: auto
    double alpha = 0.0; ///< 0: auto

    std::string output_dir;
    std::string seed_label;

    /// Resolved flat key=value echo (written into the run directory so that
    /// `verify` can re-ingest the exact configuration).
    std::string to_text() const;
};

/// Parses and validates. Simulation mode restricts gamma to (6/5, 4/3].
/// Throws domain_error naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies the initial-data selector, the eps default (half the radius of the
/// first equal-mass shell when eps_radius < 0; the resolved value is written
/// back into cfg.solver.eps_radius) and the velocity perturbation.
InitialData build_initial_data(RunConfig& cfg);

} // namespace nsp
