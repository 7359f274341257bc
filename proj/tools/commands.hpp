#pragma once

#include "CLI11.hpp"
#include "common.hpp"

namespace dapkit::cli {

// Registers every subcommand on the app.  Each callback throws dapkit errors;
// main() maps them to exit codes.
void register_shells(CLI::App& app, GlobalOptions& opts);
void register_zpl_series(CLI::App& app, GlobalOptions& opts);
void register_zpl_fit(CLI::App& app, GlobalOptions& opts);
void register_pl_spectrum(CLI::App& app, GlobalOptions& opts);
void register_dipole(CLI::App& app, GlobalOptions& opts);
void register_stark_fit(CLI::App& app, GlobalOptions& opts);
void register_interaction_map(CLI::App& app, GlobalOptions& opts);
void register_lifetime(CLI::App& app, GlobalOptions& opts);
void register_ctl(CLI::App& app, GlobalOptions& opts);
void register_reproduce(CLI::App& app, GlobalOptions& opts);

}  // namespace dapkit::cli
