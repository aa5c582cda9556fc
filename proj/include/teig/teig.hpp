#pragma once

// Everything in one include.

#include "errors.hpp"
#include "quadrature.hpp"
#include "profile.hpp"
#include "shooting.hpp"
#include "dispersion.hpp"
#include "parallel.hpp"
#include "spectra.hpp"
#include "factorization.hpp"
#include "sampling.hpp"
#include "inversion.hpp"
#include "verify.hpp"
#include "json_io.hpp"
