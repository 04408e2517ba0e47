#pragma once

#include "noise_logic/coincidence.hpp"
#include "noise_logic/error.hpp"
#include "noise_logic/neural_gates.hpp"
#include "noise_logic/rng.hpp"
#include "noise_logic/spike_core.hpp"
#include "noise_logic/train_io.hpp"
#include "noise_logic/verification_protocol.hpp"
