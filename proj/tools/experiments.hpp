// One entry point per CLI subcommand. Each writes its artifacts through the
// emitter and registers named pass/fail checks.
#pragma once

#include "config.hpp"
#include "manifest.hpp"

namespace pnlab::cli {

void run_operator_check(const RunConfig& cfg, Emitter& em, int workers);
void run_layer(const RunConfig& cfg, Emitter& em, int workers);
void run_psi(const RunConfig& cfg, Emitter& em, int workers);
void run_cell(const RunConfig& cfg, Emitter& em, int workers);
void run_hbar_table(const RunConfig& cfg, Emitter& em, int workers);
void run_orowan(const RunConfig& cfg, Emitter& em, int workers);
void run_ansatz_residual(const RunConfig& cfg, Emitter& em, int workers);
void run_homogenize_compare(const RunConfig& cfg, Emitter& em, int workers);

}  // namespace pnlab::cli
