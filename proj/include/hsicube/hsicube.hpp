#ifndef HSICUBE_HSICUBE_HPP
#define HSICUBE_HSICUBE_HPP

#include "hsicube/attention.hpp"
#include "hsicube/bench.hpp"
#include "hsicube/cube.hpp"
#include "hsicube/dataset_stats.hpp"
#include "hsicube/error.hpp"
#include "hsicube/frame.hpp"
#include "hsicube/illuminant.hpp"
#include "hsicube/metrics.hpp"
#include "hsicube/normalization.hpp"
#include "hsicube/parallel.hpp"
#include "hsicube/pipeline.hpp"
#include "hsicube/sensor.hpp"
#include "hsicube/stages.hpp"
#include "hsicube/synth.hpp"

#endif  // HSICUBE_HSICUBE_HPP
