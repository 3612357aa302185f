// Everything in one include.
#pragma once

#include "corrlab/acceptance.hpp"
#include "corrlab/cli.hpp"
#include "corrlab/correlations.hpp"
#include "corrlab/diophantine.hpp"
#include "corrlab/error.hpp"
#include "corrlab/kernels.hpp"
#include "corrlab/modcount.hpp"
#include "corrlab/numeric.hpp"
#include "corrlab/parallel.hpp"
#include "corrlab/pipeline.hpp"
#include "corrlab/report.hpp"
#include "corrlab/sequences.hpp"
