#pragma once

#include "nlsthresh/config.hpp"
#include "nlsthresh/errors.hpp"
#include "nlsthresh/evolution.hpp"
#include "nlsthresh/functionals.hpp"
#include "nlsthresh/gn_minimize.hpp"
#include "nlsthresh/ground_state.hpp"
#include "nlsthresh/initial_data.hpp"
#include "nlsthresh/io.hpp"
#include "nlsthresh/norms.hpp"
#include "nlsthresh/params.hpp"
#include "nlsthresh/rearrange.hpp"
#include "nlsthresh/svg.hpp"
#include "nlsthresh/sweep.hpp"
#include "nlsthresh/thresholds.hpp"
#include "nlsthresh/verify.hpp"
