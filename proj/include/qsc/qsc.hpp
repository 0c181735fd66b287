#pragma once

#include "qsc/errors.hpp"
#include "qsc/algebra/complex_surd.hpp"
#include "qsc/algebra/formal_scalar.hpp"
#include "qsc/algebra/op_poly.hpp"
#include "qsc/algebra/weyl_term.hpp"
#include "qsc/ito/differential.hpp"
#include "qsc/ito/hp_system.hpp"
#include "qsc/ito/io_relations.hpp"
#include "qsc/ito/char_fn_generator.hpp"
#include "qsc/gaussian/moment_model.hpp"
#include "qsc/gaussian/dynamics.hpp"
#include "qsc/gaussian/squeezing.hpp"
#include "qsc/pde/char_fn.hpp"
#include "qsc/fock/oracle.hpp"
