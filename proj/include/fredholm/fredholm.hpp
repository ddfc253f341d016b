#pragma once

#include "errors.hpp"
#include "laurent.hpp"
#include "roots.hpp"
#include "index.hpp"
#include "symbol.hpp"
#include "winding.hpp"
#include "toeplitz.hpp"
#include "parallel.hpp"
#include "phase_diagram.hpp"
#include "hall/harper.hpp"
#include "hall/landau.hpp"
#include "hall/pup.hpp"
