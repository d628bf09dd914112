#ifndef POLYSPECTRA_POLYSPECTRA_HPP
#define POLYSPECTRA_POLYSPECTRA_HPP

// Umbrella header for the whole library.

#include "polyspectra/cli.hpp"
#include "polyspectra/coxeter.hpp"
#include "polyspectra/io.hpp"
#include "polyspectra/tetra.hpp"
#include "polyspectra/verify.hpp"

#endif
