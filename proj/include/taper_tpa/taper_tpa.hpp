#ifndef TAPER_TPA_TAPER_TPA_HPP
#define TAPER_TPA_TAPER_TPA_HPP

#include "taper_tpa/atom_dynamics.hpp"
#include "taper_tpa/config.hpp"
#include "taper_tpa/csv.hpp"
#include "taper_tpa/errors.hpp"
#include "taper_tpa/mode_field.hpp"
#include "taper_tpa/mode_solver.hpp"
#include "taper_tpa/ode.hpp"
#include "taper_tpa/parallel.hpp"
#include "taper_tpa/quadrature.hpp"
#include "taper_tpa/specfun.hpp"
#include "taper_tpa/tpa_engine.hpp"
#include "taper_tpa/units.hpp"
#include "taper_tpa/verify.hpp"

#endif // TAPER_TPA_TAPER_TPA_HPP
