// cohdyn.hpp: umbrella include for the whole library.
#pragma once

#include "cohdyn/bath.hpp"
#include "cohdyn/closed_form.hpp"
#include "cohdyn/coherence.hpp"
#include "cohdyn/config.hpp"
#include "cohdyn/csv.hpp"
#include "cohdyn/dynamics.hpp"
#include "cohdyn/errors.hpp"
#include "cohdyn/format.hpp"
#include "cohdyn/presets.hpp"
#include "cohdyn/quadrature.hpp"
#include "cohdyn/runner.hpp"
#include "cohdyn/states.hpp"
#include "cohdyn/thermometry.hpp"
#include "cohdyn/types.hpp"
