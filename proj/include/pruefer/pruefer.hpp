#pragma once

// Umbrella header for the library modules (the CLI layer is separate: pruefer/cli.hpp).

#include "pruefer/bounds.hpp"
#include "pruefer/errors.hpp"
#include "pruefer/io.hpp"
#include "pruefer/lemma_audit.hpp"
#include "pruefer/oracle.hpp"
#include "pruefer/potential.hpp"
#include "pruefer/prufer.hpp"
#include "pruefer/quadrature.hpp"
#include "pruefer/sensitivity.hpp"
#include "pruefer/spectrum.hpp"
