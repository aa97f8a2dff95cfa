#pragma once

#include "fano_model.hpp"
#include "gw_extractor.hpp"
#include "initial_data.hpp"
#include "jet.hpp"
#include "jet_integrator.hpp"
#include "jet_matrix.hpp"
#include "linalg_q.hpp"
#include "oracles.hpp"
#include "rational.hpp"
#include "structure_engine.hpp"
