#pragma once

#include "sobolev/admm.hpp"
#include "sobolev/closed_form.hpp"
#include "sobolev/csv.hpp"
#include "sobolev/error.hpp"
#include "sobolev/experiment.hpp"
#include "sobolev/fft.hpp"
#include "sobolev/flow.hpp"
#include "sobolev/frequency.hpp"
#include "sobolev/gradient.hpp"
#include "sobolev/gradient_descent.hpp"
#include "sobolev/image.hpp"
#include "sobolev/image_io.hpp"
#include "sobolev/kernel.hpp"
#include "sobolev/linear_operator.hpp"
#include "sobolev/metrics.hpp"
#include "sobolev/multiplier.hpp"
#include "sobolev/noise.hpp"
#include "sobolev/objective.hpp"
#include "sobolev/pde_norm.hpp"
#include "sobolev/reproduce.hpp"
#include "sobolev/rng.hpp"
#include "sobolev/shrink.hpp"
#include "sobolev/sweep.hpp"
#include "sobolev/synth.hpp"
