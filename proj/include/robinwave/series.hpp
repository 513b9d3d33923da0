#pragma once

#include <vector>

#include "robinwave/model.hpp"

namespace robinwave {

/// Instantaneous simulation state (displacement and velocity).
struct State {
    double t = 0.0;
    GridField u;
    GridField ut;
};

/// One monitored row of a simulation: every scalar the criteria and
/// the energy balance read. cum_damping and cum_forcing are the running
/// time integrals of ||u_t||^2 and (u_t, h), accumulated by the stepper.
struct Record {
    double t = 0.0;
    double norm_u_sq = 0.0;
    double norm_ut_sq = 0.0;
    double grad_sq = 0.0;
    double boundary_sq = 0.0;
    double potential = 0.0;
    double u_dot_ut = 0.0;
    double energy = 0.0;
    double cum_damping = 0.0;
    double cum_forcing = 0.0;
};

/// Time-ordered record stream of a run, with optional field snapshots.
/// Invariant: record times strictly increase; all stored scalars are
/// finite (recording stops at numerical escape).
struct SimSeries {
    std::vector<Record> records;
    std::vector<State> snapshots;
};

}  // namespace robinwave
