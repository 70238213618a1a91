// spectra.hpp: umbrella header

#pragma once

#include "spectra/config.hpp"
#include "spectra/csv.hpp"
#include "spectra/dynamics.hpp"
#include "spectra/linalg.hpp"
#include "spectra/oracle.hpp"
#include "spectra/overlaps.hpp"
#include "spectra/polynomial.hpp"
#include "spectra/run.hpp"
#include "spectra/spectrum.hpp"
#include "spectra/validate.hpp"
