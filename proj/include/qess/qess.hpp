#pragma once

// Umbrella header for the whole library.

#include "qess/cli.hpp"
#include "qess/closed_form.hpp"
#include "qess/dynamics.hpp"
#include "qess/equilibrium.hpp"
#include "qess/game_file.hpp"
#include "qess/game_model.hpp"
#include "qess/quantum_engine.hpp"
