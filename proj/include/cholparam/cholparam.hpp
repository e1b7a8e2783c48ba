#ifndef CHOLPARAM_CHOLPARAM_HPP
#define CHOLPARAM_CHOLPARAM_HPP

#include "cholparam/errors.hpp"
#include "cholparam/matrix_core.hpp"
#include "cholparam/rng.hpp"
#include "cholparam/parametrizations.hpp"
#include "cholparam/identities.hpp"
#include "cholparam/randcorr.hpp"
#include "cholparam/ar1_sampling.hpp"
#include "cholparam/dependence_test.hpp"
#include "cholparam/matrix_io.hpp"

#endif  // CHOLPARAM_CHOLPARAM_HPP
